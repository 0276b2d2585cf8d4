use std::collections::BTreeSet;

use super::poly::MultiPoly;
use crate::arith::Scalar;

/// Full remainder of `f` on division by `divisors` (leading terms first).
pub fn reduce(f: &MultiPoly, divisors: &[MultiPoly]) -> MultiPoly {
    let mut p = f.clone();
    let mut rem = MultiPoly::zero(f.nvars());
    while let Some((lm, lc)) = p.leading() {
        let (lm, lc) = (lm.clone(), lc.clone());
        let hit = divisors.iter().find_map(|g| {
            let (gm, gc) = g.leading()?;
            gm.divides(&lm).then(|| (g, gm.quotient(&lm), &lc / gc))
        });
        match hit {
            Some((g, q, c)) => p.add_mul_term(g, &q, &-c),
            None => {
                rem.add_term(lm.clone(), &lc);
                p.add_term(lm, &-lc);
            }
        }
    }
    rem
}

fn s_poly(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let (fm, fc) = f.leading().expect("non-zero");
    let (gm, gc) = g.leading().expect("non-zero");
    let l = fm.lcm(gm);
    let mut s = MultiPoly::zero(f.nvars());
    s.add_mul_term(f, &fm.quotient(&l), &(&Scalar::one() / fc));
    s.add_mul_term(g, &gm.quotient(&l), &-(&Scalar::one() / gc));
    s
}

/// Reduced Gröbner basis in graded reverse lexicographic order.
///
/// Critical pairs are taken smallest lcm first, ties by creation order; the
/// coprime-leading-term and chain criteria discard pairs. The zero ideal
/// gives `[0]`, the unit ideal `[1]`.
pub fn buchberger(input: &[MultiPoly]) -> Vec<MultiPoly> {
    let nvars = input.first().map_or(0, MultiPoly::nvars);
    let mut basis: Vec<MultiPoly> = Vec::new();
    for f in input {
        let r = reduce(f, &basis);
        if !r.is_zero() {
            basis.push(r.monic());
        }
    }
    if basis.is_empty() {
        return vec![MultiPoly::zero(nvars)];
    }
    let mut queue: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            queue.insert((i, j));
        }
    }
    while !basis.iter().any(MultiPoly::is_unit) {
        let next = queue
            .iter()
            .min_by(|&&(a, b), &&(c, d)| {
                let l1 = basis[a].leading().unwrap().0.lcm(basis[b].leading().unwrap().0);
                let l2 = basis[c].leading().unwrap().0.lcm(basis[d].leading().unwrap().0);
                l1.cmp(&l2).then((b, a).cmp(&(d, c)))
            })
            .copied();
        let Some((i, j)) = next else { break };
        queue.remove(&(i, j));
        let (mi, mj) = (basis[i].leading().unwrap().0.clone(), basis[j].leading().unwrap().0.clone());
        if mi.coprime(&mj) {
            continue;
        }
        let l = mi.lcm(&mj);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading().unwrap().0.divides(&l)
                && !queue.contains(&key(i, k))
                && !queue.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let r = reduce(&s_poly(&basis[i], &basis[j]), &basis);
        if !r.is_zero() {
            let k = basis.len();
            basis.push(r.monic());
            for a in 0..k {
                queue.insert((a, k));
            }
        }
    }
    if let Some(u) = basis.iter().find(|g| g.is_unit()) {
        return vec![u.monic()];
    }
    reduce_basis(basis)
}

fn reduce_basis(basis: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut minimal: Vec<MultiPoly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let gm = g.leading().unwrap().0;
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            let hm = h.leading().unwrap().0;
            l != k && hm.divides(gm) && (hm != gm || l < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out: Vec<MultiPoly> = (0..minimal.len())
        .map(|k| {
            let others: Vec<MultiPoly> = minimal
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != k)
                .map(|(_, h)| h.clone())
                .collect();
            let g = &minimal[k];
            let (lm, lc) = g.leading().unwrap();
            let tail = g.sub(&MultiPoly::term(lm.clone(), lc.clone()));
            let mut r = reduce(&tail, &others);
            r.add_term(lm.clone(), lc);
            r.monic()
        })
        .collect();
    out.sort_by(|a, b| a.leading().unwrap().0.cmp(b.leading().unwrap().0));
    out
}

/// Membership test against a Gröbner basis.
pub fn in_ideal(f: &MultiPoly, gb: &[MultiPoly]) -> bool {
    reduce(f, gb).is_zero()
}

/// `f ∈ √⟨polys⟩`, decided by `1 ∈ ⟨polys, 1 - t f⟩` in one extra variable.
pub fn in_radical(f: &MultiPoly, polys: &[MultiPoly]) -> bool {
    let n = f.nvars();
    let mut ext: Vec<MultiPoly> = polys.iter().map(|p| p.extend(1)).collect();
    let t = MultiPoly::var(n + 1, n);
    ext.push(MultiPoly::one(n + 1).sub(&t.mul(&f.extend(1))));
    let gb = buchberger(&ext);
    gb.len() == 1 && gb[0].is_unit()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn c(n: usize, k: i64) -> MultiPoly {
        MultiPoly::constant(n, Scalar::from_int(k))
    }

    #[test]
    fn trivial_bases() {
        let x = v(1, 0);
        let p = x.mul(&x).sub(&x);
        assert_eq!(buchberger(&[p.clone()]), vec![p]);
        assert_eq!(buchberger(&[x.clone(), x.add(&c(1, 1))]), vec![c(1, 1)]);
        assert!(buchberger(&[MultiPoly::zero(1)])[0].is_zero());
    }

    #[test]
    fn textbook_example() {
        // ⟨x^2 - y, x^3 - x⟩ in grevlex with x > y: basis {x^2 - y, xy - x, y^2 - y}
        let (x, y) = (v(2, 0), v(2, 1));
        let f = x.mul(&x).sub(&y);
        let g = x.mul(&x).mul(&x).sub(&x);
        let gb = buchberger(&[f, g]);
        let want = vec![y.mul(&y).sub(&y), x.mul(&y).sub(&x), x.mul(&x).sub(&y)];
        assert_eq!(gb, want);
    }

    #[test]
    fn membership() {
        let (x, y) = (v(2, 0), v(2, 1));
        let gens = [x.mul(&x), y.sub(&x)];
        let gb = buchberger(&gens);
        assert!(in_ideal(&y.mul(&y), &gb));
        assert!(!in_ideal(&y, &gb));
        assert!(in_radical(&y, &gens));
        assert!(!in_radical(&x.add(&c(2, 1)), &gens));
    }

    #[test]
    fn basis_generates_same_ideal() {
        let (x, y, z) = (v(3, 0), v(3, 1), v(3, 2));
        let gens = vec![x.mul(&y).sub(&z), y.mul(&z).sub(&x), x.mul(&z).sub(&y)];
        let gb = buchberger(&gens);
        for g in &gens {
            assert!(in_ideal(g, &gb));
        }
        // every S-polynomial of the result reduces to zero
        for a in 0..gb.len() {
            for b in 0..a {
                assert!(reduce(&s_poly(&gb[a], &gb[b]), &gb).is_zero());
            }
        }
    }
}

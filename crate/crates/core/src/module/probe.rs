use std::collections::{BTreeMap, BTreeSet};

use super::ConformalModule;
use crate::arith::{DPoly, Scalar};
use crate::element::{AlgElement, ModElement, Parity};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank, IncrementalSpan, SparseVec};

/// Outcome of a submodule closure test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closure {
    /// `C[∂]`-span of the candidates is a submodule; `basis` is its echelon
    /// basis over `C[∂]`.
    Closed { basis: Vec<ModElement> },
    /// `generator_(n)` applied to candidate number `source` leaves the span.
    Open {
        generator: String,
        n: u32,
        source: usize,
        image: ModElement,
        remainder: ModElement,
    },
}

impl Closure {
    pub fn is_closed(&self) -> bool {
        matches!(self, Closure::Closed { .. })
    }
}

/// Echelon form over `Q[∂]` with monic pivots.
fn hermite(rows: &[ModElement], width: usize) -> Vec<(usize, ModElement)> {
    let mut remaining: Vec<ModElement> = rows.iter().filter(|r| !r.is_zero()).cloned().collect();
    let mut out = Vec::new();
    for col in 0..width {
        let (mut with, without): (Vec<ModElement>, Vec<ModElement>) =
            remaining.into_iter().partition(|r| !r.get(col).is_zero());
        remaining = without;
        while with.len() > 1 {
            let r2 = with.pop().expect("two rows");
            let r1 = with.pop().expect("two rows");
            let (p, q) = (r1.get(col), r2.get(col));
            let (g, s, t) = DPoly::ext_gcd(&p, &q);
            let combined = &r1.mul_poly(&s) + &r2.mul_poly(&t);
            let (pg, _) = p.divmod(&g).expect("gcd divides");
            let (qg, _) = q.divmod(&g).expect("gcd divides");
            let cleared = &r1.mul_poly(&qg) - &r2.mul_poly(&pg);
            with.push(combined);
            if !cleared.is_zero() {
                remaining.push(cleared);
            }
        }
        if let Some(row) = with.pop() {
            let lead = row.get(col).leading().cloned().expect("non-zero pivot");
            out.push((col, row.scale(&lead.recip().expect("non-zero"))));
        }
    }
    out
}

/// Division of `target` by the echelon rows; zero iff `target` lies in their span.
fn echelon_remainder(rows: &[(usize, ModElement)], target: &ModElement) -> ModElement {
    let mut t = target.clone();
    for (col, row) in rows {
        let (q, _) = t.get(*col).divmod(&row.get(*col)).expect("monic pivot");
        if !q.is_zero() {
            t = &t - &row.mul_poly(&q);
        }
    }
    t
}

fn check_candidate(module: &ConformalModule, w: &ModElement) -> Result<()> {
    if w.is_zero() {
        return Err(Error::ZeroElement);
    }
    module.parity_of(w)?;
    Ok(())
}

/// Whether `C[∂] w_1 + ... + C[∂] w_r` is closed under every `a_(n)`.
pub fn submodule_closed(module: &ConformalModule, candidates: &[ModElement]) -> Result<Closure> {
    if !module.carrier().is_free() {
        return Err(Error::TorsionCarrier);
    }
    if candidates.is_empty() {
        return Err(Error::ZeroElement);
    }
    for w in candidates {
        check_candidate(module, w)?;
    }
    let rows = hermite(candidates, module.carrier().len());
    let alg = module.algebra();
    for (idx, w) in candidates.iter().enumerate() {
        for (i, g) in alg.generators().iter().enumerate() {
            let x = AlgElement::basis(i);
            for n in 0..module.vanishing_bound(&x, w) {
                let image = module.act_unchecked(&x, n, w);
                let remainder = echelon_remainder(&rows, &image);
                if !remainder.is_zero() {
                    return Ok(Closure::Open {
                        generator: g.name.clone(),
                        n,
                        source: idx,
                        image,
                        remainder,
                    });
                }
            }
        }
    }
    Ok(Closure::Closed {
        basis: rows.into_iter().map(|(_, r)| r).collect(),
    })
}

/// Whether `C[∂] w` is a submodule. The witness remainder is taken by
/// dividing by `w`'s first non-zero component.
pub fn cyclic_submodule_closed(module: &ConformalModule, w: &ModElement) -> Result<Closure> {
    submodule_closed(module, std::slice::from_ref(w))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOp {
    Act { generator: String, n: u32 },
    Derive,
}

/// Vector number `id` obtained by applying `op` to vector number `source`
/// (vector 0 is the starting element).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub id: usize,
    pub source: usize,
    pub op: StepOp,
    pub result: ModElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `target = Σ c_id · vector(id)`, with the steps producing every vector used.
    Yes {
        steps: Vec<Step>,
        combination: Vec<(usize, Scalar)>,
    },
    /// Not reached inside the degree-truncated closure; inconclusive.
    NoWitnessUpToCap { cap: usize, dimension: usize },
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes { .. })
    }
}

fn coords(v: &ModElement) -> SparseVec<(usize, usize)> {
    let mut out = SparseVec::new();
    for (b, p) in v.terms() {
        for (k, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                out.insert((b, k), c.clone());
            }
        }
    }
    out
}

/// `deg w + (largest ∂-degree in the action table) + 3`.
pub fn default_degree_cap(module: &ConformalModule, w: &ModElement) -> usize {
    w.degree().unwrap_or(0) + module.max_action_degree() + 3
}

/// Closes `{w}` under all `a_(n)` and under `∂`, over the rationals, keeping
/// only vectors of degree at most `cap`, and tests whether `target` is reached.
pub fn generated_submodule_contains(
    module: &ConformalModule,
    w: &ModElement,
    target: &ModElement,
    cap: usize,
) -> Result<Membership> {
    check_candidate(module, w)?;
    if w.degree().unwrap_or(0) > cap {
        return Err(Error::Spec(format!("degree cap {cap} is below the degree of the generator")));
    }
    let target_c = coords(&module.reduce(target));
    let mut span = IncrementalSpan::new();
    let mut vectors = vec![module.reduce(w)];
    let mut parents: Vec<Option<(usize, StepOp)>> = vec![None];
    span.insert(&coords(&vectors[0]));

    let finish = |combo: SparseVec<usize>, vectors: &[ModElement], parents: &[Option<(usize, StepOp)>]| {
        let mut needed = BTreeSet::new();
        let mut stack: Vec<usize> = combo.keys().copied().collect();
        while let Some(id) = stack.pop() {
            if needed.insert(id) {
                if let Some((src, _)) = &parents[id] {
                    stack.push(*src);
                }
            }
        }
        let steps = needed
            .iter()
            .filter_map(|&id| {
                parents[id].as_ref().map(|(src, op)| Step {
                    id,
                    source: *src,
                    op: op.clone(),
                    result: vectors[id].clone(),
                })
            })
            .collect();
        Membership::Yes {
            steps,
            combination: combo.into_iter().collect(),
        }
    };

    if let Some(combo) = span.express(&target_c) {
        return Ok(finish(combo, &vectors, &parents));
    }
    let alg = module.algebra();
    let mut next = 0;
    while next < vectors.len() {
        let v = vectors[next].clone();
        let mut produced = Vec::new();
        for (i, g) in alg.generators().iter().enumerate() {
            let x = AlgElement::basis(i);
            for n in 0..module.vanishing_bound(&x, &v) {
                produced.push((
                    StepOp::Act {
                        generator: g.name.clone(),
                        n,
                    },
                    module.act_unchecked(&x, n, &v),
                ));
            }
        }
        produced.push((StepOp::Derive, module.reduce(&v.shift(1))));
        for (op, y) in produced {
            if y.is_zero() || y.degree().unwrap_or(0) > cap {
                continue;
            }
            if span.insert(&coords(&y)).is_some() {
                vectors.push(y);
                parents.push(Some((next, op)));
                if let Some(combo) = span.express(&target_c) {
                    return Ok(finish(combo, &vectors, &parents));
                }
            }
        }
        next += 1;
    }
    Ok(Membership::NoWitnessUpToCap {
        cap,
        dimension: span.dim(),
    })
}

/// Basis of the degree-truncated singular vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Singular {
    pub basis: Vec<ModElement>,
    /// For `N ≥ 1`: whether all `∂^j v_i` with `j ≤ cap` are linearly
    /// independent (freeness of `C[∂]` times the singular space).
    pub independent: Option<bool>,
}

/// `{v : deg v ≤ cap, a_(n) v = 0 for all generators a and all n ≥ level}`,
/// computed separately in each parity.
pub fn singular_subspace(module: &ConformalModule, level: u32, cap: usize) -> Result<Singular> {
    let carrier = module.carrier();
    let alg = module.algebra();
    let mut basis = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let mut cols = Vec::new();
        for (b, cb) in carrier.basis().iter().enumerate() {
            if cb.parity != parity {
                continue;
            }
            let top = match cb.torsion.degree() {
                Some(d) if !cb.is_free() => d.min(cap + 1),
                _ => cap + 1,
            };
            cols.extend((0..top).map(|k| (b, k)));
        }
        if cols.is_empty() {
            continue;
        }
        let mut rows: BTreeMap<(usize, u32, usize, usize), Vec<Scalar>> = BTreeMap::new();
        for (c, &(b, k)) in cols.iter().enumerate() {
            let v = ModElement::term(b, DPoly::monomial(Scalar::one(), k));
            for i in 0..alg.len() {
                let x = AlgElement::basis(i);
                for n in level..module.vanishing_bound(&x, &v).max(level) {
                    for ((g, j), val) in coords(&module.act_unchecked(&x, n, &v)) {
                        rows.entry((i, n, g, j)).or_insert_with(|| vec![Scalar::zero(); cols.len()])[c] = val;
                    }
                }
            }
        }
        let matrix: Vec<Vec<Scalar>> = rows.into_values().collect();
        for null in nullspace(&matrix, cols.len()) {
            let mut v = ModElement::zero();
            for (c, &(b, k)) in cols.iter().enumerate() {
                v.add_term(b, &DPoly::monomial(null[c].clone(), k));
            }
            basis.push(v);
        }
    }
    let independent = (level >= 1).then(|| {
        let mut key = BTreeMap::new();
        let mut vecs = Vec::new();
        for v in &basis {
            for j in 0..=cap {
                vecs.push(coords(&module.reduce(&v.shift(j))));
            }
        }
        for c in vecs.iter().flat_map(|v| v.keys()) {
            let len = key.len();
            key.entry(*c).or_insert(len);
        }
        let dense: Vec<Vec<Scalar>> = vecs
            .iter()
            .map(|v| {
                let mut row = vec![Scalar::zero(); key.len()];
                for (c, x) in v {
                    row[key[c]] = x.clone();
                }
                row
            })
            .collect();
        rank(&dense) == dense.len()
    });
    Ok(Singular { basis, independent })
}

use std::collections::{BTreeMap, HashSet};

use serde_json::{json, Value};

use super::poly::MultiPoly;
use crate::algebra::ConformalAlgebra;
use crate::arith::{binom, falling, DPoly, Scalar};
use crate::element::{ModElement, Parity};
use crate::error::{Error, Result};
use crate::module::{ConformalModule, ModuleCarrier};

/// One unknown coefficient: `gen_(n) basis ∋ c · ∂^k target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unknown {
    pub gen: usize,
    pub basis: usize,
    pub n: u32,
    pub target: usize,
    pub k: usize,
    pub name: String,
}

/// Which commutator identity a constraint polynomial came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub left: String,
    pub right: String,
    pub m: u32,
    pub n: u32,
    pub basis: String,
    pub target: String,
    pub degree: usize,
}

impl Provenance {
    pub fn to_json(&self) -> Value {
        json!({
            "left": self.left,
            "right": self.right,
            "m": self.m,
            "n": self.n,
            "basis": self.basis,
            "target": self.target,
            "degree": self.degree,
        })
    }
}

/// Quadratic system in the unknown action coefficients whose zeros are the
/// action tables satisfying the commutator identity.
#[derive(Clone, Debug)]
pub struct ConstraintSystem {
    pub algebra: ConformalAlgebra,
    pub carrier: ModuleCarrier,
    pub nmax: u32,
    pub dmax: usize,
    pub unknowns: Vec<Unknown>,
    pub polys: Vec<MultiPoly>,
    pub provenance: Vec<Provenance>,
}

impl ConstraintSystem {
    pub fn nvars(&self) -> usize {
        self.unknowns.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.unknowns.iter().map(|u| u.name.clone()).collect()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.unknowns.iter().position(|u| u.name == name)
    }

    pub fn var(&self, name: &str) -> Option<MultiPoly> {
        self.index_of(name).map(|i| MultiPoly::var(self.nvars(), i))
    }

    /// Indices of constraints that fail at a point.
    pub fn violated_at(&self, point: &[Scalar]) -> Vec<usize> {
        (0..self.polys.len())
            .filter(|&k| !self.polys[k].eval(point).is_zero())
            .collect()
    }

    /// The concrete module whose action table is given by `point`.
    pub fn module_at(&self, point: &[Scalar]) -> Result<ConformalModule> {
        if point.len() != self.nvars() {
            return Err(Error::DimensionMismatch(format!("{} values for {} unknowns", point.len(), self.nvars())));
        }
        let mut table: BTreeMap<(usize, usize, u32), ModElement> = BTreeMap::new();
        for (u, c) in self.unknowns.iter().zip(point) {
            let e = table.entry((u.gen, u.basis, u.n)).or_insert_with(ModElement::zero);
            e.add_term(u.target, &DPoly::monomial(c.clone(), u.k));
        }
        let mut m = ConformalModule::new("rank-1 solution", self.algebra.clone(), self.carrier.clone());
        for ((i, b, n), v) in table {
            m.set_action(i, b, n, v)?;
        }
        Ok(m)
    }

    pub fn to_json(&self) -> Value {
        let names = self.names();
        json!({
            "algebra": self.algebra.name,
            "nmax": self.nmax,
            "dmax": self.dmax,
            "unknowns": names,
            "constraints": self
                .polys
                .iter()
                .zip(&self.provenance)
                .map(|(p, src)| json!({"poly": p.render(&names), "from": src.to_json()}))
                .collect::<Vec<_>>(),
        })
    }
}

/// `Σ_β Σ_l coeff_{β,l} ∂^l v_β` with polynomial coefficients.
type SymVec = BTreeMap<usize, Vec<MultiPoly>>;

fn sym_add(acc: &mut SymVec, v: &SymVec, shift: usize, c: &MultiPoly) {
    for (&b, coeffs) in v {
        let slot = acc.entry(b).or_default();
        for (l, q) in coeffs.iter().enumerate() {
            let p = q.mul(c);
            if p.is_zero() {
                continue;
            }
            while slot.len() <= l + shift {
                slot.push(MultiPoly::zero(c.nvars()));
            }
            slot[l + shift].add_scaled(&p, &Scalar::one());
        }
    }
}

struct SymModule {
    nvars: usize,
    table: BTreeMap<(usize, usize, u32), SymVec>,
}

impl SymModule {
    /// `a^i_(m) v`, moving `a_(m)` past `∂^l` with `a_(m)∂ = ∂a_(m) + m a_(m-1)`.
    fn act(&self, i: usize, m: u32, v: &SymVec) -> SymVec {
        let mut out = SymVec::new();
        for (&b, coeffs) in v {
            for (l, q) in coeffs.iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                for t in 0..=l.min(m as usize) {
                    let Some(image) = self.table.get(&(i, b, m - t as u32)) else { continue };
                    let c = &binom(l as i64, t) * &falling(m as i64, t);
                    sym_add(&mut out, image, l - t, &q.scale(&c));
                }
            }
        }
        out
    }

    /// `(Σ_k r_k(∂) x_k)_(p) v` using `(∂^r x)_(p) = (-1)^r p^{(r)} x_(p-r)`.
    fn act_element(&self, x: &crate::element::AlgElement, p: u32, v: &SymVec) -> SymVec {
        let mut out = SymVec::new();
        for (k, poly) in x.terms() {
            for (r, c) in poly.coeffs().iter().enumerate() {
                if r > p as usize || c.is_zero() {
                    continue;
                }
                let mut f = c * &falling(p as i64, r);
                if r % 2 == 1 {
                    f = -f;
                }
                sym_add(&mut out, &self.act(k, p - r as u32, v), 0, &MultiPoly::constant(self.nvars, f));
            }
        }
        out
    }
}

fn unknown_name(alg: &ConformalAlgebra, carrier: &ModuleCarrier, i: usize, b: usize, n: u32, g: usize, k: usize) -> String {
    if alg.len() == 1 && carrier.len() == 1 {
        format!("c{n}{k}")
    } else {
        let names = carrier.names();
        format!("c[{},{n},{}→{},{k}]", alg.names()[i], names[b], names[g])
    }
}

/// Rank-1 Virasoro-style ansatz `a_(n) u = p_n(∂) u` on a single even basis
/// vector `u`; see [`generate_constraints`].
pub fn generate_rank1_constraints(alg: &ConformalAlgebra, nmax: u32, dmax: usize) -> ConstraintSystem {
    generate_constraints(alg, &ModuleCarrier::free(&[("u", Parity::Even)]), nmax, dmax)
}

/// Constraints for actions `a_(n) v_β = Σ_γ p(∂) v_γ` with `n < nmax`,
/// `deg p ≤ dmax`, and parity-compatible targets.
///
/// The residual of `a_(m)(b_(n)v) - ± b_(n)(a_(m)v) = Σ_j C(m,j)(a_(j)b)_(m+n-j) v`
/// (left minus right) is expanded for each `(a,m) > (b,n)` (and `(a,m) = (b,n)`
/// with `a` odd), every basis vector, and `m, n < nmax + max(dmax, N + deg)`;
/// beyond that both sides vanish. Each non-zero ∂-coefficient is one
/// constraint, kept monic and without repeats.
pub fn generate_constraints(alg: &ConformalAlgebra, carrier: &ModuleCarrier, nmax: u32, dmax: usize) -> ConstraintSystem {
    let bnames = carrier.names();
    let gnames = alg.names();
    let mut unknowns = Vec::new();
    for i in 0..alg.len() {
        for (b, bb) in carrier.basis().iter().enumerate() {
            for n in 0..nmax {
                for (g, gb) in carrier.basis().iter().enumerate() {
                    if alg.parity(i) + bb.parity != gb.parity {
                        continue;
                    }
                    for k in 0..=dmax {
                        let name = unknown_name(alg, carrier, i, b, n, g, k);
                        unknowns.push(Unknown { gen: i, basis: b, n, target: g, k, name });
                    }
                }
            }
        }
    }
    let nv = unknowns.len();
    let mut table: BTreeMap<(usize, usize, u32), SymVec> = BTreeMap::new();
    for (idx, u) in unknowns.iter().enumerate() {
        let e = table.entry((u.gen, u.basis, u.n)).or_default();
        let slot = e.entry(u.target).or_default();
        while slot.len() <= u.k {
            slot.push(MultiPoly::zero(nv));
        }
        slot[u.k] = MultiPoly::var(nv, idx);
    }
    let sym = SymModule { nvars: nv, table };

    let reach = (alg.max_bound() as usize + alg.max_table_degree()).max(dmax);
    let bound = nmax + reach as u32;
    let mut polys = Vec::new();
    let mut provenance = Vec::new();
    let mut seen: HashSet<MultiPoly> = HashSet::new();
    for i in 0..alg.len() {
        for j in 0..alg.len() {
            let sign = alg.parity(i).sign(alg.parity(j));
            for m in 0..bound {
                for n in 0..bound {
                    let keep = (i, m) > (j, n) || ((i, m) == (j, n) && alg.parity(i) == Parity::Odd);
                    if !keep {
                        continue;
                    }
                    for b in 0..carrier.len() {
                        let v: SymVec = BTreeMap::from([(b, vec![MultiPoly::one(nv)])]);
                        let mut res = sym.act(i, m, &sym.act(j, n, &v));
                        let swapped = sym.act(j, n, &sym.act(i, m, &v));
                        sym_add(&mut res, &swapped, 0, &MultiPoly::constant(nv, -sign.clone()));
                        for jj in 0..=m.min(alg.bound(i, j).saturating_sub(1)) {
                            let Some(x) = alg.product_ref(i, j, jj) else { continue };
                            let c = binom(m as i64, jj as usize);
                            let rhs = sym.act_element(x, m + n - jj, &v);
                            sym_add(&mut res, &rhs, 0, &MultiPoly::constant(nv, -c));
                        }
                        for (g, coeffs) in res {
                            for (deg, p) in coeffs.into_iter().enumerate() {
                                if p.is_zero() {
                                    continue;
                                }
                                let p = p.monic();
                                if !seen.insert(p.clone()) {
                                    continue;
                                }
                                polys.push(p);
                                provenance.push(Provenance {
                                    left: gnames[i].clone(),
                                    right: gnames[j].clone(),
                                    m,
                                    n,
                                    basis: bnames[b].clone(),
                                    target: bnames[g].clone(),
                                    degree: deg,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    ConstraintSystem {
        algebra: alg.clone(),
        carrier: carrier.clone(),
        nmax,
        dmax,
        unknowns,
        polys,
        provenance,
    }
}

//! Finite-dimensional Lie superalgebras given by structure constants, and
//! their finite-dimensional representations.

use std::collections::BTreeMap;

use serde_json::json;

use crate::arith::Scalar;
use crate::element::Parity;
use crate::error::{Error, Result};
use crate::report::{Location, Report};

/// Finitely supported `Σ c_k x_k` over the Lie basis.
pub type LieVec = BTreeMap<usize, Scalar>;

fn lie_add(acc: &mut LieVec, v: &LieVec, c: &Scalar) {
    for (&k, x) in v {
        let entry = acc.entry(k).or_insert_with(Scalar::zero);
        *entry += &(x * c);
        if entry.is_zero() {
            acc.remove(&k);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieBasis {
    pub name: String,
    pub parity: Parity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSuperData {
    pub name: String,
    basis: Vec<LieBasis>,
    bracket: BTreeMap<(usize, usize), LieVec>,
}

impl LieSuperData {
    pub fn new(name: &str, basis: &[(&str, Parity)]) -> Self {
        LieSuperData {
            name: name.to_string(),
            basis: basis
                .iter()
                .map(|(n, p)| LieBasis {
                    name: n.to_string(),
                    parity: *p,
                })
                .collect(),
            bracket: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[LieBasis] {
        &self.basis
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.basis
            .iter()
            .position(|b| b.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    fn combination(&self, terms: &[(&str, i64)]) -> LieVec {
        let mut v = LieVec::new();
        for (n, c) in terms {
            let k = self.index_of(n).expect("known basis name");
            lie_add(&mut v, &LieVec::from([(k, Scalar::one())]), &Scalar::from_int(*c));
        }
        v
    }

    /// Sets `[x, y]` and its super-skew partner `[y, x]`.
    pub fn with_bracket(mut self, x: &str, y: &str, terms: &[(&str, i64)]) -> Self {
        let (i, j) = (self.index_of(x).unwrap(), self.index_of(y).unwrap());
        let v = self.combination(terms);
        let mut partner = LieVec::new();
        lie_add(&mut partner, &v, &-self.parity(i).sign(self.parity(j)));
        self.set_raw(i, j, v);
        if i != j {
            self.set_raw(j, i, partner);
        }
        self
    }

    /// Overwrites a single structure constant entry without touching its
    /// partner (used to build deliberately broken data).
    pub fn set_raw(&mut self, i: usize, j: usize, v: LieVec) {
        if v.is_empty() {
            self.bracket.remove(&(i, j));
        } else {
            self.bracket.insert((i, j), v);
        }
    }

    pub fn bracket(&self, i: usize, j: usize) -> LieVec {
        self.bracket.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn bracket_vec(&self, x: &LieVec, y: &LieVec) -> LieVec {
        let mut out = LieVec::new();
        for (&i, a) in x {
            for (&j, b) in y {
                lie_add(&mut out, &self.bracket(i, j), &(a * b));
            }
        }
        out
    }

    pub fn render(&self, v: &LieVec) -> String {
        if v.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (&k, c) in v {
            let neg = c.is_negative();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !c.abs().is_one() {
                out.push_str(&c.abs().to_string());
            }
            out.push_str(&self.basis[k].name);
        }
        out
    }

    fn vec_json(&self, v: &LieVec) -> serde_json::Value {
        json!(v
            .iter()
            .map(|(&k, c)| json!({"gen": self.basis[k].name, "coeff": c}))
            .collect::<Vec<_>>())
    }

    /// Checks super-skew-symmetry, parity homogeneity and the super-Jacobi
    /// identity on all basis pairs and triples.
    pub fn validate(&self) -> Report {
        let mut report = Report::new(format!("lie-data {}", self.name));
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let xy = self.bracket(i, j);
                let target = self.parity(i) + self.parity(j);
                if xy.keys().any(|&k| self.parity(k) != target) {
                    report.push(
                        "parity",
                        Location::new([&self.basis[i].name, &self.basis[j].name]),
                        self.vec_json(&xy),
                        self.render(&xy),
                    );
                }
                let mut skew = xy.clone();
                lie_add(&mut skew, &self.bracket(j, i), &self.parity(i).sign(self.parity(j)));
                if !skew.is_empty() {
                    report.push(
                        "skew",
                        Location::new([&self.basis[i].name, &self.basis[j].name]),
                        self.vec_json(&skew),
                        self.render(&skew),
                    );
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = LieVec::from([(i, Scalar::one())]);
                    let y = LieVec::from([(j, Scalar::one())]);
                    let z = LieVec::from([(k, Scalar::one())]);
                    // [x,[y,z]] - [[x,y],z] - (-1)^{|x||y|} [y,[x,z]]
                    let mut res = self.bracket_vec(&x, &self.bracket_vec(&y, &z));
                    lie_add(&mut res, &self.bracket_vec(&self.bracket_vec(&x, &y), &z), &Scalar::from_int(-1));
                    lie_add(
                        &mut res,
                        &self.bracket_vec(&y, &self.bracket_vec(&x, &z)),
                        &-self.parity(i).sign(self.parity(j)),
                    );
                    if !res.is_empty() {
                        report.push(
                            "jacobi",
                            Location::new([&self.basis[i].name, &self.basis[j].name, &self.basis[k].name]),
                            self.vec_json(&res),
                            self.render(&res),
                        );
                    }
                }
            }
        }
        report
    }

    /// `sl₂` with basis `e, h, f`.
    pub fn sl2() -> Self {
        LieSuperData::new("sl2", &[("e", Parity::Even), ("h", Parity::Even), ("f", Parity::Even)])
            .with_bracket("e", "f", &[("h", 1)])
            .with_bracket("h", "e", &[("e", 2)])
            .with_bracket("h", "f", &[("f", -2)])
    }

    /// `osp(1|2)`: `sl₂` plus odd `x, y`.
    pub fn osp12() -> Self {
        LieSuperData::new(
            "osp12",
            &[
                ("e", Parity::Even),
                ("h", Parity::Even),
                ("f", Parity::Even),
                ("x", Parity::Odd),
                ("y", Parity::Odd),
            ],
        )
        .with_bracket("e", "f", &[("h", 1)])
        .with_bracket("h", "e", &[("e", 2)])
        .with_bracket("h", "f", &[("f", -2)])
        .with_bracket("h", "x", &[("x", 1)])
        .with_bracket("h", "y", &[("y", -1)])
        .with_bracket("e", "y", &[("x", -1)])
        .with_bracket("f", "x", &[("y", -1)])
        .with_bracket("x", "x", &[("e", 2)])
        .with_bracket("y", "y", &[("f", -2)])
        .with_bracket("x", "y", &[("h", 1)])
    }

    /// Abelian Lie algebra of the given dimension, basis `a1, a2, ...`.
    pub fn abelian(dim: usize) -> Self {
        let names: Vec<String> = (1..=dim).map(|k| format!("a{k}")).collect();
        let basis: Vec<(&str, Parity)> = names.iter().map(|n| (n.as_str(), Parity::Even)).collect();
        LieSuperData::new(&format!("abelian{dim}"), &basis)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "sl2" => Ok(LieSuperData::sl2()),
            "osp12" => Ok(LieSuperData::osp12()),
            other => match other.strip_prefix("abelian").and_then(|d| d.parse().ok()) {
                Some(d) if d > 0 => Ok(LieSuperData::abelian(d)),
                _ => Err(Error::InvalidLieData(format!("unknown Lie superalgebra {other:?}"))),
            },
        }
    }
}

/// Square matrix acting on column vectors: `π(a) u_k = Σ_l m[l][k] u_l`.
pub type Matrix = Vec<Vec<Scalar>>;

pub fn zero_matrix(dim: usize) -> Matrix {
    vec![vec![Scalar::zero(); dim]; dim]
}

pub fn identity_matrix(dim: usize) -> Matrix {
    let mut m = zero_matrix(dim);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = Scalar::one();
    }
    m
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = zero_matrix(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += &t;
            }
        }
    }
    out
}

/// A finite-dimensional representation of a Lie superalgebra, one matrix per
/// Lie basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieRep {
    pub name: String,
    pub parities: Vec<Parity>,
    pub matrices: Vec<Matrix>,
}

impl LieRep {
    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    /// Checks dimensions, parity preservation and `π([a,b]) = [π(a), π(b)]`.
    pub fn validate(&self, lie: &LieSuperData) -> Result<()> {
        let d = self.dim();
        if self.matrices.len() != lie.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} matrices for a {}-dimensional Lie superalgebra",
                self.matrices.len(),
                lie.dim()
            )));
        }
        if self.matrices.iter().any(|m| m.len() != d || m.iter().any(|r| r.len() != d)) {
            return Err(Error::DimensionMismatch(format!("matrices must be {d}x{d}")));
        }
        for (a, m) in self.matrices.iter().enumerate() {
            for l in 0..d {
                for k in 0..d {
                    if !m[l][k].is_zero() && self.parities[l] != self.parities[k] + lie.parity(a) {
                        return Err(Error::InvalidLieData(format!(
                            "representation of {} does not respect parity",
                            lie.basis()[a].name
                        )));
                    }
                }
            }
        }
        for a in 0..lie.dim() {
            for b in 0..lie.dim() {
                let mut lhs = zero_matrix(d);
                for (c, coeff) in lie.bracket(a, b) {
                    for (l, row) in lhs.iter_mut().enumerate() {
                        for (k, x) in row.iter_mut().enumerate() {
                            *x += &(&coeff * &self.matrices[c][l][k]);
                        }
                    }
                }
                let ab = mat_mul(&self.matrices[a], &self.matrices[b]);
                let ba = mat_mul(&self.matrices[b], &self.matrices[a]);
                let sign = lie.parity(a).sign(lie.parity(b));
                for l in 0..d {
                    for k in 0..d {
                        if lhs[l][k] != &ab[l][k] - &(&sign * &ba[l][k]) {
                            return Err(Error::InvalidLieData(format!(
                                "not a representation: [{}, {}]",
                                lie.basis()[a].name,
                                lie.basis()[b].name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// The irreducible `sl₂`-module of highest weight `n` (dimension `n+1`).
    pub fn sl2_irrep(n: usize) -> LieRep {
        let d = n + 1;
        let (mut e, mut h, mut f) = (zero_matrix(d), zero_matrix(d), zero_matrix(d));
        for k in 0..d {
            h[k][k] = Scalar::from_int(n as i64 - 2 * k as i64);
            if k + 1 < d {
                f[k + 1][k] = Scalar::one();
            }
            if k > 0 {
                e[k - 1][k] = Scalar::from_int((k * (n - k + 1)) as i64);
            }
        }
        LieRep {
            name: format!("V({n})"),
            parities: vec![Parity::Even; d],
            matrices: vec![e, h, f],
        }
    }

    pub fn trivial(lie: &LieSuperData) -> LieRep {
        LieRep {
            name: "trivial".into(),
            parities: vec![Parity::Even],
            matrices: vec![zero_matrix(1); lie.dim()],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_is_valid() {
        let r = LieSuperData::sl2().validate();
        assert!(r.passed(), "{:?}", r.violations);
    }

    #[test]
    fn abelian_is_valid() {
        assert!(LieSuperData::abelian(1).validate().passed());
    }

    #[test]
    fn osp12_is_valid() {
        let r = LieSuperData::osp12().validate();
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn mutated_sl2_fails_jacobi_on_efh() {
        // [e,f] = h + e, with its skew partner kept consistent
        let g = LieSuperData::sl2().with_bracket("e", "f", &[("h", 1), ("e", 1)]);
        let r = g.validate();
        assert!(!r.passed());
        assert!(r.find("skew").is_none());
        let witness = r
            .violations
            .iter()
            .find(|v| v.check == "jacobi" && v.location.subjects == ["e", "f", "h"])
            .expect("jacobi witness on (e, f, h)");
        // [e,[f,h]] - [[e,f],h] - [f,[e,h]] = 2(h+e) + 2e - 2(h+e) = 2e
        assert_eq!(witness.rendering, "2e");
    }

    #[test]
    fn one_sided_mutation_breaks_skew() {
        let mut g = LieSuperData::sl2();
        g.set_raw(0, 2, LieVec::from([(1, Scalar::from_int(2))]));
        let r = g.validate();
        assert!(r.find("skew").is_some());
    }

    #[test]
    fn sl2_irreps_are_representations() {
        let g = LieSuperData::sl2();
        for n in 0..4 {
            LieRep::sl2_irrep(n).validate(&g).unwrap();
        }
        let mut bad = LieRep::sl2_irrep(1);
        bad.matrices[1][0][0] = Scalar::from_int(3);
        assert!(bad.validate(&g).is_err());
    }
}

//! Text forms of elements: `(d+1/2)u`, `2∂^2 L - G`, `e_(0)`-free sums over
//! named generators or basis vectors. `d` and `∂` both denote the derivation,
//! and `theta` may be written for `θ`.

use crate::arith::{DPoly, Scalar};
use crate::element::PolyVec;
use crate::error::{Error, Result};

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
    src: String,
}

fn is_ident(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == 'θ' || c == '\''
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> String {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn rational(&mut self) -> Result<Scalar> {
        let num = self.digits();
        let mut lit = num.clone();
        if self.chars.get(self.pos) == Some(&'/') {
            self.pos += 1;
            let den = self.digits();
            if den.is_empty() {
                return Err(self.err("expected denominator"));
            }
            lit = format!("{num}/{den}");
        }
        if self.chars.get(self.pos) == Some(&'.') {
            return Err(Error::NonRational(format!("{lit}.")));
        }
        lit.parse()
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.eat('^') {
            self.skip_ws();
            self.digits().parse().map_err(|_| self.err("expected exponent"))
        } else {
            Ok(1)
        }
    }

    /// Sum of `c ∂^k` terms inside parentheses.
    fn poly(&mut self) -> Result<DPoly> {
        let mut acc = DPoly::zero();
        let mut first = true;
        loop {
            let mut sign = Scalar::one();
            match self.peek() {
                Some('+') if !first => self.pos += 1,
                Some('-') => {
                    self.pos += 1;
                    sign = -sign;
                }
                _ if !first => break,
                _ => {}
            }
            first = false;
            let mut c = sign;
            let mut k = 0;
            let mut any = false;
            loop {
                match self.peek() {
                    Some(ch) if ch.is_ascii_digit() => {
                        c = &c * &self.rational()?;
                        any = true;
                    }
                    Some('∂') | Some('d') => {
                        self.pos += 1;
                        k += self.exponent()?;
                        any = true;
                    }
                    Some('*') if any => self.pos += 1,
                    _ => break,
                }
            }
            if !any {
                return Err(self.err("expected polynomial term"));
            }
            acc = acc + DPoly::monomial(c, k);
        }
        Ok(acc)
    }

    fn name(&mut self) -> Result<(usize, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|&c| is_ident(c)) {
            self.pos += 1;
        }
        let word: String = self.chars[start..self.pos].iter().collect();
        if word.is_empty() {
            return Err(self.err("expected a name"));
        }
        // leading d's are powers of ∂ unless the whole word is a name
        let lead = word.chars().take_while(|&c| c == 'd').count();
        for skip in 0..=lead {
            let rest: String = word.chars().skip(skip).collect();
            if let Some(i) = self.names.iter().position(|n| *n == rest) {
                return Ok((i, skip));
            }
        }
        Err(Error::Parse(format!("unknown name {word:?} in {:?}", self.src)))
    }

    fn term(&mut self) -> Result<(usize, DPoly)> {
        let mut p = DPoly::one();
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => p = p.scale(&self.rational()?),
                Some('(') => {
                    self.pos += 1;
                    p = &p * &self.poly()?;
                    if !self.eat(')') {
                        return Err(self.err("expected ')'"));
                    }
                }
                Some('∂') => {
                    self.pos += 1;
                    let k = self.exponent()?;
                    p = p.shift(k);
                }
                Some('d') if matches!(self.chars.get(self.pos + 1), Some('^') | Some(' ') | Some('(') | Some('*')) => {
                    self.pos += 1;
                    let k = self.exponent()?;
                    p = p.shift(k);
                }
                Some('*') => self.pos += 1,
                _ => break,
            }
        }
        let (i, k) = self.name()?;
        Ok((i, p.shift(k)))
    }

    fn element(&mut self) -> Result<PolyVec> {
        let mut out = PolyVec::zero();
        let mut first = true;
        loop {
            let mut sign = Scalar::one();
            match self.peek() {
                None if !first => break,
                Some('+') if !first => self.pos += 1,
                Some('-') => {
                    self.pos += 1;
                    sign = -sign;
                }
                Some(_) if !first => return Err(self.err("expected '+' or '-'")),
                _ => {}
            }
            first = false;
            if self.peek() == Some('0') && self.chars.get(self.pos + 1).map_or(true, |c| c.is_whitespace()) {
                self.pos += 1;
                continue;
            }
            let (i, p) = self.term()?;
            out.add_term(i, &p.scale(&sign));
        }
        Ok(out)
    }
}

/// Parses `Σ p_i(∂) name_i` against a list of names; `0` is the zero element.
pub fn parse_element(src: &str, names: &[String]) -> Result<PolyVec> {
    let text = src.replace("theta", "θ");
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        names,
        src: src.to_string(),
    };
    if p.peek().is_none() {
        return Err(Error::Parse("empty element".into()));
    }
    p.element()
}

/// `NAME:m` as a generator index and a mode.
pub fn parse_mode(src: &str, names: &[String]) -> Result<(usize, i64)> {
    let (name, m) = src
        .rsplit_once(':')
        .ok_or_else(|| Error::Parse(format!("mode must look like L:2, got {src:?}")))?;
    let name = name.trim().replace("theta", "θ");
    let i = names
        .iter()
        .position(|n| *n == name)
        .ok_or_else(|| Error::UnknownGenerator(name.clone()))?;
    let m = m.trim().parse().map_err(|_| Error::Parse(format!("bad mode index in {src:?}")))?;
    Ok((i, m))
}

/// `name=value` with a rational value.
pub fn parse_param(src: &str) -> Result<(String, Scalar)> {
    let (k, v) = src
        .split_once('=')
        .ok_or_else(|| Error::Parse(format!("parameter must look like alpha=1/2, got {src:?}")))?;
    Ok((k.trim().to_string(), v.trim().parse()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn elements() {
        let n = names(&["u", "uθ", "du"]);
        let half = Scalar::frac(1, 2);
        assert_eq!(parse_element("(d+1/2)u", &n).unwrap(), PolyVec::term(0, DPoly::d_plus(half.clone())));
        assert_eq!(parse_element("(∂ + 1/2) u", &n).unwrap(), PolyVec::term(0, DPoly::d_plus(half)));
        assert_eq!(parse_element("2∂^2 u", &n).unwrap(), PolyVec::term(0, DPoly::from_ints(&[0, 0, 2])));
        assert_eq!(parse_element("d^2 u", &n).unwrap(), PolyVec::term(0, DPoly::from_ints(&[0, 0, 1])));
        assert_eq!(parse_element("-utheta", &n).unwrap(), PolyVec::term(1, DPoly::from_ints(&[-1])));
        assert_eq!(parse_element("du", &n).unwrap(), PolyVec::basis(2));
        assert_eq!(parse_element("ddu", &n).unwrap(), PolyVec::term(2, DPoly::d()));
        let sum = parse_element("u - 3/4 u + (d - 1)(d + 1)uθ", &n).unwrap();
        let mut want = PolyVec::term(0, DPoly::constant(Scalar::frac(1, 4)));
        want.add_term(1, &DPoly::from_ints(&[-1, 0, 1]));
        assert_eq!(sum, want);
        assert!(parse_element("0", &n).unwrap().is_zero());
    }

    #[test]
    fn rejects() {
        let n = names(&["u"]);
        assert!(parse_element("v", &n).is_err());
        assert!(parse_element("(d+0.5)u", &n).is_err());
        assert!(parse_element("u u", &n).is_err());
        assert!(parse_element("", &n).is_err());
        assert!(parse_element("(d u", &n).is_err());
    }

    #[test]
    fn modes_and_params() {
        let n = names(&["L", "G"]);
        assert_eq!(parse_mode("L:2", &n).unwrap(), (0, 2));
        assert_eq!(parse_mode("G:-1", &n).unwrap(), (1, -1));
        assert!(parse_mode("H:1", &n).is_err());
        assert_eq!(parse_param("alpha=1/2").unwrap(), ("alpha".into(), Scalar::frac(1, 2)));
        assert!(parse_param("alpha=0.5").is_err());
    }
}

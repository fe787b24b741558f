//! Sparse bivariate polynomials over `f64` with exact partial derivatives.
//!
//! Terms are kept in graded-lexicographic order (total degree first, then
//! the `x`-exponent), which fixes the summation order during evaluation and
//! the term order during serialization, so results are reproducible
//! bit-for-bit across runs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Exponent pair of one monomial `x^i * y^j`, ordered graded-lex.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.i + self.j
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.degree(), self.i).cmp(&(other.degree(), other.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Which variable to differentiate by.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    X,
    Y,
}

/// Sparse bivariate polynomial. Zero coefficients are never stored, so the
/// zero polynomial has no terms.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Poly2 {
    terms: BTreeMap<Monomial, f64>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, c);
        p
    }

    /// The monomial `c * x^i * y^j`.
    pub fn term(i: u32, j: u32, c: f64) -> Self {
        let mut p = Self::zero();
        p.add_term(i, j, c);
        p
    }

    pub fn var_x() -> Self {
        Self::term(1, 0, 1.0)
    }

    pub fn var_y() -> Self {
        Self::term(0, 1, 1.0)
    }

    /// Builds from `(i, j, coefficient)` triples; repeated exponent pairs
    /// accumulate.
    pub fn from_triples<I: IntoIterator<Item = (u32, u32, f64)>>(triples: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in triples {
            p.add_term(i, j, c);
        }
        p
    }

    /// Terms in graded-lex order as `(i, j, coefficient)` triples.
    pub fn to_triples(&self) -> Vec<(u32, u32, f64)> {
        self.terms.iter().map(|(m, &c)| (m.i, m.j, c)).collect()
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: f64) {
        if c == 0.0 {
            return;
        }
        let m = Monomial { i, j };
        let entry = self.terms.entry(m).or_insert(0.0);
        *entry += c;
        if *entry == 0.0 {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn coefficient(&self, i: u32, j: u32) -> f64 {
        self.terms.get(&Monomial { i, j }).copied().unwrap_or(0.0)
    }

    /// Largest coefficient magnitude (0 for the zero polynomial).
    pub fn coeff_scale(&self) -> f64 {
        self.terms.values().fold(0.0, |acc, c| acc.max(c.abs()))
    }

    /// Evaluates by summing terms in graded-lex order. The fixed order makes
    /// the result deterministic for a given term set.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for (m, &c) in &self.terms {
            acc += c * x.powi(m.i as i32) * y.powi(m.j as i32);
        }
        acc
    }

    /// Exact partial derivative (integer exponent arithmetic, no rounding
    /// beyond the coefficient product).
    pub fn diff(&self, var: Var) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, &c) in &self.terms {
            match var {
                Var::X => {
                    if m.i > 0 {
                        out.add_term(m.i - 1, m.j, c * m.i as f64);
                    }
                }
                Var::Y => {
                    if m.j > 0 {
                        out.add_term(m.i, m.j - 1, c * m.j as f64);
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, k: f64) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, &c) in &self.terms {
            out.add_term(m.i, m.j, c * k);
        }
        out
    }

    /// Swaps the roles of `x` and `y` (transposes every exponent pair).
    pub fn swap_vars(&self) -> Poly2 {
        let mut out = Poly2::zero();
        for (m, &c) in &self.terms {
            out.add_term(m.j, m.i, c);
        }
        out
    }
}

impl std::ops::Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.i, m.j, c);
        }
        out
    }
}

impl std::ops::Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.i, m.j, -c);
        }
        out
    }
}

impl std::ops::Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                out.add_term(ma.i + mb.i, ma.j + mb.j, ca * cb);
            }
        }
        out
    }
}

impl std::ops::Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        self.scale(-1.0)
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, &c) in &self.terms {
            let shown = if first {
                first = false;
                c
            } else {
                write!(f, " {} ", if c < 0.0 { "-" } else { "+" })?;
                c.abs()
            };
            match (m.i, m.j) {
                (0, 0) => write!(f, "{shown}")?,
                _ => {
                    if shown != 1.0 {
                        write!(f, "{shown}*")?;
                    }
                    if m.i > 0 {
                        write!(f, "x")?;
                        if m.i > 1 {
                            write!(f, "^{}", m.i)?;
                        }
                    }
                    if m.j > 0 {
                        if m.i > 0 {
                            write!(f, "*")?;
                        }
                        write!(f, "y")?;
                        if m.j > 1 {
                            write!(f, "^{}", m.j)?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl Serialize for Poly2 {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        self.to_triples().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Poly2 {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let triples = Vec::<(u32, u32, f64)>::deserialize(de)?;
        Ok(Poly2::from_triples(triples))
    }
}

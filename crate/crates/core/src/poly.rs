//! Trivariate polynomials with exact rational coefficients.
//!
//! A [`TriPoly`] is a sparse map from exponent triples to nonzero
//! coefficients. The zero polynomial is the empty map. Terms are kept in
//! graded order (total degree first, then lexicographic), which fixes the
//! text and JSON serialization.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{fmt_rational, half, int, parse_rational, to_f64, Rational};

/// One of the three Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i % 3]
    }

    /// 1-based label as used in printed operator names.
    pub fn label(self) -> usize {
        self.index() + 1
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl Serialize for Axis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.label() as u8)
    }
}

impl<'de> Deserialize<'de> for Axis {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match u8::deserialize(d)? {
            1 => Ok(Axis::X1),
            2 => Ok(Axis::X2),
            3 => Ok(Axis::X3),
            other => Err(serde::de::Error::custom(format!("axis must be 1, 2 or 3, got {other}"))),
        }
    }
}

/// Exponent triple x1^a x2^b x3^c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Monomial([a, b, c])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponent(&self, axis: Axis) -> u32 {
        self.0[axis.index()]
    }

    /// All monomials of total degree exactly `d`, in canonical order.
    pub fn of_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for a in 0..=d {
            for b in 0..=(d - a) {
                out.push(Monomial([a, b, d - a - b]));
            }
        }
        out.sort();
        out
    }

    /// All monomials of total degree at most `dmax`; there are C(dmax+3, 3).
    pub fn up_to_degree(dmax: u32) -> Vec<Monomial> {
        (0..=dmax).flat_map(Monomial::of_degree).collect()
    }

    fn key(&self) -> String {
        format!("{},{},{}", self.0[0], self.0[1], self.0[2])
    }

    fn from_key(s: &str) -> Option<Monomial> {
        let mut it = s.split(',').map(|p| p.trim().parse::<u32>());
        let a = it.next()?.ok()?;
        let b = it.next()?.ok()?;
        let c = it.next()?.ok()?;
        if it.next().is_some() {
            return None;
        }
        Some(Monomial([a, b, c]))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Axis::ALL
            .iter()
            .filter(|ax| self.exponent(**ax) > 0)
            .map(|ax| match self.exponent(*ax) {
                1 => format!("x{}", ax.label()),
                e => format!("x{}^{}", ax.label(), e),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Sparse trivariate polynomial over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TriPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn one() -> Self {
        TriPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        TriPoly::term(c, Monomial::ONE)
    }

    pub fn term(c: Rational, m: Monomial) -> Self {
        let mut p = TriPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn monomial(m: Monomial) -> Self {
        TriPoly::term(Rational::one(), m)
    }

    pub fn var(axis: Axis) -> Self {
        let mut e = [0; 3];
        e[axis.index()] = 1;
        TriPoly::monomial(Monomial(e))
    }

    /// x1^2 + x2^2 + x3^2.
    pub fn r_squared() -> Self {
        Axis::ALL
            .iter()
            .map(|ax| {
                let mut e = [0; 3];
                e[ax.index()] = 2;
                TriPoly::monomial(Monomial(e))
            })
            .fold(TriPoly::zero(), |acc, t| acc + t)
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = TriPoly::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Adds `c * m`, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Leading term in the canonical order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &Rational) -> TriPoly {
        if c.is_zero() {
            return TriPoly::zero();
        }
        TriPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    /// R_i: flips the sign of every term odd in the given coordinate.
    pub fn reflect(&self, axis: Axis) -> TriPoly {
        TriPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| {
                    if m.exponent(axis) % 2 == 1 {
                        (*m, -v.clone())
                    } else {
                        (*m, v.clone())
                    }
                })
                .collect(),
        }
    }

    /// Exact division by x_i; every term must contain x_i.
    pub fn coordinate_divide(&self, axis: Axis) -> Result<TriPoly> {
        let i = axis.index();
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            if m.0[i] == 0 {
                return Err(Error::NotDivisible { axis });
            }
            let mut e = m.0;
            e[i] -= 1;
            terms.insert(Monomial(e), v.clone());
        }
        Ok(TriPoly { terms })
    }

    /// (1/x_i)(1 - R_i) p, i.e. twice the x_i-odd part divided by x_i.
    pub fn difference_quotient(&self, axis: Axis) -> TriPoly {
        let i = axis.index();
        let two = int(2);
        TriPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[i] % 2 == 1)
                .map(|(m, v)| {
                    let mut e = m.0;
                    e[i] -= 1;
                    (Monomial(e), v * &two)
                })
                .collect(),
        }
    }

    pub fn partial(&self, axis: Axis) -> TriPoly {
        let i = axis.index();
        TriPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[i] > 0)
                .map(|(m, v)| {
                    let mut e = m.0;
                    let k = e[i];
                    e[i] -= 1;
                    (Monomial(e), v * int(k as i64))
                })
                .collect(),
        }
    }

    pub fn mul_var(&self, axis: Axis) -> TriPoly {
        let i = axis.index();
        TriPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| {
                    let mut e = m.0;
                    e[i] += 1;
                    (Monomial(e), v.clone())
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> TriPoly {
        let mut acc = TriPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational; 3]) -> Rational {
        let mut acc = Rational::zero();
        for (m, v) in &self.terms {
            let mut t = v.clone();
            for (x, e) in point.iter().zip(m.0.iter()) {
                for _ in 0..*e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, point: [f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(m, v)| {
                to_f64(v)
                    * point[0].powi(m.0[0] as i32)
                    * point[1].powi(m.0[1] as i32)
                    * point[2].powi(m.0[2] as i32)
            })
            .sum()
    }

    /// Multiplies each term of degree d by (x1^2+x2^2+x3^2)^((target - d)/2).
    pub fn homogenize_by_r2(&self, target_degree: u32) -> Result<TriPoly> {
        let r2 = TriPoly::r_squared();
        let mut out = TriPoly::zero();
        let mut powers: Vec<TriPoly> = vec![TriPoly::one()];
        for (m, v) in &self.terms {
            let d = m.degree();
            if d > target_degree || !(target_degree - d).is_multiple_of(2) {
                return Err(Error::ParityMismatch { term_degree: d, target_degree });
            }
            let k = ((target_degree - d) / 2) as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * &r2;
                powers.push(next);
            }
            out += &(&powers[k] * &TriPoly::term(v.clone(), *m));
        }
        Ok(out)
    }

    /// Substitutes x_j -> sign_j * x_{target_j} for each source axis j.
    /// `map[j] = (target, negate)`.
    pub fn substitute_axes(&self, map: [(Axis, bool); 3]) -> TriPoly {
        let mut out = TriPoly::zero();
        for (m, v) in &self.terms {
            let mut e = [0u32; 3];
            let mut negative = false;
            for (j, (target, negate)) in map.iter().enumerate() {
                e[target.index()] += m.0[j];
                if *negate && m.0[j] % 2 == 1 {
                    negative = !negative;
                }
            }
            out.add_term(Monomial(e), if negative { -v.clone() } else { v.clone() });
        }
        out
    }

    /// Splits into homogeneous components keyed by degree.
    pub fn homogeneous_parts(&self) -> BTreeMap<u32, TriPoly> {
        let mut out: BTreeMap<u32, TriPoly> = BTreeMap::new();
        for (m, v) in &self.terms {
            out.entry(m.degree()).or_default().add_term(*m, v.clone());
        }
        out
    }
}

impl Neg for TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        TriPoly {
            terms: self.terms.into_iter().map(|(m, v)| (m, -v)).collect(),
        }
    }
}

impl Neg for &TriPoly {
    type Output = TriPoly;
    fn neg(self) -> TriPoly {
        -self.clone()
    }
}

impl AddAssign<&TriPoly> for TriPoly {
    fn add_assign(&mut self, rhs: &TriPoly) {
        for (m, v) in &rhs.terms {
            self.add_term(*m, v.clone());
        }
    }
}

impl AddAssign for TriPoly {
    fn add_assign(&mut self, rhs: TriPoly) {
        for (m, v) in rhs.terms {
            self.add_term(m, v);
        }
    }
}

impl SubAssign<&TriPoly> for TriPoly {
    fn sub_assign(&mut self, rhs: &TriPoly) {
        for (m, v) in &rhs.terms {
            self.add_term(*m, -v.clone());
        }
    }
}

impl Add for TriPoly {
    type Output = TriPoly;
    fn add(mut self, rhs: TriPoly) -> TriPoly {
        self += rhs;
        self
    }
}

impl Add<&TriPoly> for &TriPoly {
    type Output = TriPoly;
    fn add(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for TriPoly {
    type Output = TriPoly;
    fn sub(mut self, rhs: TriPoly) -> TriPoly {
        self -= &rhs;
        self
    }
}

impl Sub<&TriPoly> for &TriPoly {
    type Output = TriPoly;
    fn sub(self, rhs: &TriPoly) -> TriPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&TriPoly> for &TriPoly {
    type Output = TriPoly;
    fn mul(self, rhs: &TriPoly) -> TriPoly {
        let mut out = TriPoly::zero();
        for (ma, va) in &self.terms {
            for (mb, vb) in &rhs.terms {
                let e = [ma.0[0] + mb.0[0], ma.0[1] + mb.0[1], ma.0[2] + mb.0[2]];
                out.add_term(Monomial(e), va * vb);
            }
        }
        out
    }
}

impl Mul for TriPoly {
    type Output = TriPoly;
    fn mul(self, rhs: TriPoly) -> TriPoly {
        &self * &rhs
    }
}

/// Canonical text form: `c * x1^a x2^b x3^c` terms, highest degree first.
impl fmt::Display for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, v)) in self.terms.iter().rev().enumerate() {
            let (sign, mag) = if v.is_negative() { ("-", -v.clone()) } else { ("+", v.clone()) };
            match (i, sign) {
                (0, "-") => write!(f, "-")?,
                (0, _) => {}
                (_, s) => write!(f, " {s} ")?,
            }
            if *m == Monomial::ONE {
                write!(f, "{}", fmt_rational(&mag))?;
            } else {
                write!(f, "{} * {}", fmt_rational(&mag), m)?;
            }
        }
        Ok(())
    }
}

impl FromStr for TriPoly {
    type Err = Error;

    /// Parses the canonical text form produced by `Display`.
    fn from_str(s: &str) -> Result<TriPoly> {
        let s = s.trim();
        if s == "0" {
            return Ok(TriPoly::zero());
        }
        let err = |msg: &str| Error::ParsePoly(format!("{msg} in {s:?}"));
        // Split on top-level " + " / " - " separators.
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut rest = s;
        let mut negative = false;
        if let Some(r) = rest.strip_prefix('-') {
            negative = true;
            rest = r;
        }
        loop {
            let plus = rest.find(" + ");
            let minus = rest.find(" - ");
            let next = match (plus, minus) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            match next {
                Some(idx) => {
                    pieces.push((negative, rest[..idx].to_string()));
                    negative = &rest[idx..idx + 3] == " - ";
                    rest = &rest[idx + 3..];
                }
                None => {
                    pieces.push((negative, rest.to_string()));
                    break;
                }
            }
        }
        let mut out = TriPoly::zero();
        for (neg, piece) in pieces {
            let (coef, mono) = match piece.split_once(" * ") {
                Some((c, m)) => (c.trim(), Some(m.trim())),
                None => (piece.trim(), None),
            };
            let mut c = parse_rational(coef).map_err(|_| err("bad coefficient"))?;
            if neg {
                c = -c;
            }
            let mut e = [0u32; 3];
            if let Some(mono) = mono {
                for factor in mono.split_whitespace() {
                    let (var, exp) = match factor.split_once('^') {
                        Some((v, x)) => (v, x.parse::<u32>().map_err(|_| err("bad exponent"))?),
                        None => (factor, 1),
                    };
                    let idx = match var {
                        "x1" => 0,
                        "x2" => 1,
                        "x3" => 2,
                        _ => return Err(err("unknown variable")),
                    };
                    e[idx] += exp;
                }
            }
            out.add_term(Monomial(e), c);
        }
        Ok(out)
    }
}

/// JSON: object mapping `"a,b,c"` to the coefficient string.
impl Serialize for TriPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (m, v) in &self.terms {
            map.serialize_entry(&m.key(), &fmt_rational(v))?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for TriPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut p = TriPoly::zero();
        for (k, v) in raw {
            let m = Monomial::from_key(&k)
                .ok_or_else(|| serde::de::Error::custom(format!("bad exponent key {k:?}")))?;
            let c = parse_rational(&v).map_err(serde::de::Error::custom)?;
            p.add_term(m, c);
        }
        Ok(p)
    }
}

/// Reflection-group multiplicities (mu1, mu2, mu3), each > -1/2.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Params {
    mu: [Rational; 3],
}

impl Params {
    #[cfg(test)]
    pub(crate) fn unchecked(mu: [Rational; 3]) -> Params {
        Params { mu }
    }

    pub fn new(mu1: Rational, mu2: Rational, mu3: Rational) -> Result<Params> {
        let bound = -half();
        for (i, m) in [&mu1, &mu2, &mu3].iter().enumerate() {
            if **m <= bound {
                return Err(Error::InvalidParameter(format!(
                    "mu{} = {} violates the constraint mu > -1/2",
                    i + 1,
                    fmt_rational(m)
                )));
            }
        }
        Ok(Params { mu: [mu1, mu2, mu3] })
    }

    pub fn mu(&self, axis: Axis) -> &Rational {
        &self.mu[axis.index()]
    }

    pub fn mu1(&self) -> &Rational {
        &self.mu[0]
    }

    pub fn mu2(&self) -> &Rational {
        &self.mu[1]
    }

    pub fn mu3(&self) -> &Rational {
        &self.mu[2]
    }

    pub fn as_array(&self) -> &[Rational; 3] {
        &self.mu
    }

    /// gamma = mu1 + mu2 + mu3.
    pub fn gamma(&self) -> Rational {
        &self.mu[0] + &self.mu[1] + &self.mu[2]
    }

    /// The cyclic relabelling pi = (123): (mu1, mu2, mu3) -> (mu2, mu3, mu1).
    pub fn cyclic(&self, power: u32) -> Params {
        let mut mu = self.mu.clone();
        for _ in 0..power % 3 {
            mu.rotate_left(1);
        }
        Params { mu }
    }

    pub fn to_f64(&self) -> [f64; 3] {
        [to_f64(&self.mu[0]), to_f64(&self.mu[1]), to_f64(&self.mu[2])]
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            fmt_rational(&self.mu[0]),
            fmt_rational(&self.mu[1]),
            fmt_rational(&self.mu[2])
        )
    }
}

impl Serialize for Params {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Params", 3)?;
        st.serialize_field("mu1", &fmt_rational(&self.mu[0]))?;
        st.serialize_field("mu2", &fmt_rational(&self.mu[1]))?;
        st.serialize_field("mu3", &fmt_rational(&self.mu[2]))?;
        st.end()
    }
}

//! Linear operators on [`TriPoly`] as expression trees.
//!
//! An [`Operator`] is a shared [`Node`] together with a power `p` of a
//! deferred `sqrt(2)` factor: the operator denotes `sqrt(2)^p * node`.
//! Composition adds powers; sums require equal parity. Even powers are
//! folded back into the tree as powers of 2, so only odd powers survive,
//! and an operator with an odd power cannot be applied exactly.

mod build;

pub use build::*;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Axis, TriPoly};
use crate::rational::{fmt_rational, int, serde_str, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Node {
    Identity,
    Zero,
    MulX {
        axis: Axis,
    },
    Partial {
        axis: Axis,
    },
    Reflect {
        axis: Axis,
    },
    /// (1/x_i)(1 - R_i).
    DifferenceQuotient {
        axis: Axis,
    },
    MulPoly {
        poly: TriPoly,
    },
    Scalar {
        #[serde(with = "serde_str")]
        value: Rational,
        #[serde(skip_serializing_if = "Option::is_none")]
        label: Option<String>,
    },
    Sum {
        terms: Vec<Arc<Node>>,
    },
    /// Product read left to right; the rightmost factor acts first.
    Compose {
        factors: Vec<Arc<Node>>,
    },
    Named {
        name: String,
        body: Arc<Node>,
    },
}

impl Node {
    fn is_zero(&self) -> bool {
        matches!(self, Node::Zero)
    }

    fn is_identity(&self) -> bool {
        matches!(self, Node::Identity)
    }

    fn unlabeled_scalar(&self) -> Option<&Rational> {
        match self {
            Node::Scalar { value, label: None } => Some(value),
            _ => None,
        }
    }

    pub fn apply(&self, p: &TriPoly) -> TriPoly {
        if p.is_zero() {
            return TriPoly::zero();
        }
        match self {
            Node::Identity => p.clone(),
            Node::Zero => TriPoly::zero(),
            Node::MulX { axis } => p.mul_var(*axis),
            Node::Partial { axis } => p.partial(*axis),
            Node::Reflect { axis } => p.reflect(*axis),
            Node::DifferenceQuotient { axis } => p.difference_quotient(*axis),
            Node::MulPoly { poly } => poly * p,
            Node::Scalar { value, .. } => p.scale(value),
            Node::Sum { terms } => {
                let mut out = TriPoly::zero();
                for t in terms {
                    out += t.apply(p);
                }
                out
            }
            Node::Compose { factors } => {
                let mut acc = p.clone();
                for f in factors.iter().rev() {
                    acc = f.apply(&acc);
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
            Node::Named { body, .. } => body.apply(p),
        }
    }

    /// Number of nodes in the tree, counting shared subtrees once per use.
    pub fn size(&self) -> usize {
        match self {
            Node::Sum { terms } => 1 + terms.iter().map(|t| t.size()).sum::<usize>(),
            Node::Compose { factors } => 1 + factors.iter().map(|t| t.size()).sum::<usize>(),
            Node::Named { body, .. } => 1 + body.size(),
            _ => 1,
        }
    }
}

/// `c * node` with light simplification.
fn scaled_node(c: &Rational, node: &Arc<Node>) -> Arc<Node> {
    if c.is_zero() || node.is_zero() {
        return Arc::new(Node::Zero);
    }
    if c.is_one() {
        return node.clone();
    }
    if let Some(s) = node.unlabeled_scalar() {
        return Arc::new(Node::Scalar { value: c * s, label: None });
    }
    if node.is_identity() {
        return Arc::new(Node::Scalar { value: c.clone(), label: None });
    }
    if let Node::Compose { factors } = node.as_ref() {
        if let Some(s) = factors[0].unlabeled_scalar() {
            let v = c * s;
            let mut rest: Vec<Arc<Node>> = factors[1..].to_vec();
            if !v.is_one() {
                rest.insert(0, Arc::new(Node::Scalar { value: v, label: None }));
            }
            return compose_nodes(rest);
        }
        let mut fs = vec![Arc::new(Node::Scalar { value: c.clone(), label: None })];
        fs.extend(factors.iter().cloned());
        return Arc::new(Node::Compose { factors: fs });
    }
    Arc::new(Node::Compose {
        factors: vec![Arc::new(Node::Scalar { value: c.clone(), label: None }), node.clone()],
    })
}

fn compose_nodes(factors: Vec<Arc<Node>>) -> Arc<Node> {
    let mut flat: Vec<Arc<Node>> = Vec::new();
    for f in factors {
        match f.as_ref() {
            Node::Zero => return Arc::new(Node::Zero),
            Node::Identity => {}
            Node::Compose { factors } => flat.extend(factors.iter().cloned()),
            _ => flat.push(f),
        }
    }
    // Scalars commute; gather the unlabeled ones into a single leading factor.
    let mut coeff = Rational::one();
    flat.retain(|f| match f.unlabeled_scalar() {
        Some(s) => {
            coeff *= s;
            false
        }
        None => true,
    });
    if coeff.is_zero() {
        return Arc::new(Node::Zero);
    }
    if !coeff.is_one() {
        flat.insert(0, Arc::new(Node::Scalar { value: coeff, label: None }));
    }
    match flat.len() {
        0 => Arc::new(Node::Identity),
        1 => flat.pop().unwrap(),
        _ => Arc::new(Node::Compose { factors: flat }),
    }
}

fn sum_nodes(terms: Vec<Arc<Node>>) -> Arc<Node> {
    let mut flat: Vec<Arc<Node>> = Vec::new();
    for t in terms {
        match t.as_ref() {
            Node::Zero => {}
            Node::Sum { terms } => flat.extend(terms.iter().cloned()),
            _ => flat.push(t),
        }
    }
    match flat.len() {
        0 => Arc::new(Node::Zero),
        1 => flat.pop().unwrap(),
        _ => Arc::new(Node::Sum { terms: flat }),
    }
}

/// 2^k for a possibly negative k.
fn two_pow(k: i32) -> Rational {
    let p = int(2).pow(k.abs());
    if k >= 0 {
        p
    } else {
        p.recip()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Operator {
    node: Arc<Node>,
    sqrt2_power: i32,
}

impl Operator {
    pub fn from_node(node: Node) -> Operator {
        Operator { node: Arc::new(node), sqrt2_power: 0 }
    }

    pub fn identity() -> Operator {
        Operator::from_node(Node::Identity)
    }

    pub fn zero() -> Operator {
        Operator::from_node(Node::Zero)
    }

    pub fn mul_x(axis: Axis) -> Operator {
        Operator::from_node(Node::MulX { axis })
    }

    pub fn partial(axis: Axis) -> Operator {
        Operator::from_node(Node::Partial { axis })
    }

    pub fn reflect(axis: Axis) -> Operator {
        Operator::from_node(Node::Reflect { axis })
    }

    pub fn difference_quotient(axis: Axis) -> Operator {
        Operator::from_node(Node::DifferenceQuotient { axis })
    }

    pub fn mul_poly(poly: TriPoly) -> Operator {
        Operator::from_node(Node::MulPoly { poly })
    }

    pub fn scalar(value: Rational) -> Operator {
        Operator::from_node(Node::Scalar { value, label: None })
    }

    /// A scalar printed by name, e.g. `mu2`.
    pub fn labeled_scalar(value: Rational, label: impl Into<String>) -> Operator {
        Operator::from_node(Node::Scalar { value, label: Some(label.into()) })
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn sqrt2_power(&self) -> i32 {
        self.sqrt2_power
    }

    pub fn is_zero(&self) -> bool {
        self.node.is_zero()
    }

    /// Multiplies by sqrt(2)^k without touching the tree.
    pub fn with_sqrt2(&self, k: i32) -> Operator {
        Operator { node: self.node.clone(), sqrt2_power: self.sqrt2_power + k }.normalized()
    }

    /// Wraps the tree under a display name; the action is unchanged.
    pub fn named(&self, name: impl Into<String>) -> Operator {
        Operator {
            node: Arc::new(Node::Named { name: name.into(), body: self.node.clone() }),
            sqrt2_power: self.sqrt2_power,
        }
    }

    pub fn scale(&self, c: &Rational) -> Operator {
        Operator { node: scaled_node(c, &self.node), sqrt2_power: self.sqrt2_power }
    }

    /// `self` after `rhs`.
    pub fn compose(&self, rhs: &Operator) -> Operator {
        Operator {
            node: compose_nodes(vec![self.node.clone(), rhs.node.clone()]),
            sqrt2_power: self.sqrt2_power + rhs.sqrt2_power,
        }
        .normalized()
    }

    /// Folds an even sqrt(2) power into the tree as a rational factor.
    fn normalized(self) -> Operator {
        if self.sqrt2_power == 0 || self.sqrt2_power.rem_euclid(2) != 0 {
            return self;
        }
        Operator { node: scaled_node(&two_pow(self.sqrt2_power / 2), &self.node), sqrt2_power: 0 }
    }

    /// Brings both operands to the smaller of their sqrt(2) powers.
    fn align(&self, rhs: &Operator) -> Result<(Arc<Node>, Arc<Node>, i32)> {
        let (p, q) = (self.sqrt2_power, rhs.sqrt2_power);
        if (p - q).rem_euclid(2) != 0 {
            return Err(Error::MixedScale { left: p, right: q });
        }
        let lo = p.min(q);
        Ok((
            scaled_node(&two_pow((p - lo) / 2), &self.node),
            scaled_node(&two_pow((q - lo) / 2), &rhs.node),
            lo,
        ))
    }

    pub fn checked_add(&self, rhs: &Operator) -> Result<Operator> {
        if self.is_zero() {
            return Ok(rhs.clone());
        }
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        let (a, b, power) = self.align(rhs)?;
        Ok(Operator { node: sum_nodes(vec![a, b]), sqrt2_power: power }.normalized())
    }

    pub fn checked_sub(&self, rhs: &Operator) -> Result<Operator> {
        self.checked_add(&rhs.scale(&-Rational::one()))
    }

    /// Sums a list of operators with matching sqrt(2) parity.
    pub fn checked_sum<'a, I: IntoIterator<Item = &'a Operator>>(ops: I) -> Result<Operator> {
        let mut acc = Operator::zero();
        for op in ops {
            acc = acc.checked_add(op)?;
        }
        Ok(acc)
    }

    /// `self * rhs - rhs * self`.
    pub fn commutator(&self, rhs: &Operator) -> Operator {
        self.compose(rhs) - rhs.compose(self)
    }

    /// `self * rhs + rhs * self`.
    pub fn anticommutator(&self, rhs: &Operator) -> Operator {
        self.compose(rhs) + rhs.compose(self)
    }

    /// Exact image of `p`.
    pub fn apply(&self, p: &TriPoly) -> Result<TriPoly> {
        if self.sqrt2_power.rem_euclid(2) != 0 {
            return Err(Error::IrrationalScale { power: self.sqrt2_power });
        }
        let image = self.node.apply(p);
        Ok(if self.sqrt2_power == 0 {
            image
        } else {
            image.scale(&two_pow(self.sqrt2_power / 2))
        })
    }

    /// Image of `p` under the tree alone, ignoring the sqrt(2) factor.
    pub fn apply_unscaled(&self, p: &TriPoly) -> TriPoly {
        self.node.apply(p)
    }

    /// Every variant of `self` obtained by negating one summand or one
    /// scalar somewhere in the tree, with a short description.
    pub fn sign_mutations(&self) -> Vec<(String, Operator)> {
        mutations(&self.node, "")
            .into_iter()
            .map(|(desc, node)| (desc, Operator { node, sqrt2_power: self.sqrt2_power }))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("operator trees always serialize")
    }
}

fn mutations(node: &Arc<Node>, context: &str) -> Vec<(String, Arc<Node>)> {
    let minus = -Rational::one();
    let mut out = Vec::new();
    match node.as_ref() {
        Node::Sum { terms } => {
            for (i, t) in terms.iter().enumerate() {
                let mut negated = terms.clone();
                negated[i] = scaled_node(&minus, t);
                out.push((
                    format!("{context}negate term `{}`", NodePrinter(t)),
                    Arc::new(Node::Sum { terms: negated }),
                ));
                for (desc, m) in mutations(t, context) {
                    let mut replaced = terms.clone();
                    replaced[i] = m;
                    out.push((desc, Arc::new(Node::Sum { terms: replaced })));
                }
            }
        }
        Node::Compose { factors } => {
            for (i, f) in factors.iter().enumerate() {
                for (desc, m) in mutations(f, context) {
                    let mut replaced = factors.clone();
                    replaced[i] = m;
                    out.push((desc, Arc::new(Node::Compose { factors: replaced })));
                }
            }
        }
        Node::Scalar { .. } => {
            out.push((
                format!("{context}negate scalar `{}`", NodePrinter(node)),
                scaled_node(&minus, node),
            ));
        }
        Node::Named { name, body } => {
            let inner = format!("{context}in {name}: ");
            for (desc, m) in mutations(body, &inner) {
                out.push((desc, Arc::new(Node::Named { name: name.clone(), body: m })));
            }
        }
        _ => {}
    }
    out
}

impl Add for Operator {
    type Output = Operator;

    /// # Panics
    /// If the operands carry sqrt(2) powers of different parity; use
    /// [`Operator::checked_add`] to get an error instead.
    fn add(self, rhs: Operator) -> Operator {
        self.checked_add(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        self.checked_sub(&rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Mul for Operator {
    type Output = Operator;
    fn mul(self, rhs: Operator) -> Operator {
        self.compose(&rhs)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.compose(rhs)
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(&-Rational::one())
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(&-Rational::one())
    }
}

struct NodePrinter<'a>(&'a Node);

impl fmt::Display for NodePrinter<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render(self.0))
    }
}

fn render(node: &Node) -> String {
    match node {
        Node::Identity => "1".into(),
        Node::Zero => "0".into(),
        Node::MulX { axis } => format!("x{axis}"),
        Node::Partial { axis } => format!("d{axis}"),
        Node::Reflect { axis } => format!("R{axis}"),
        Node::DifferenceQuotient { axis } => format!("(1/x{axis})(1 - R{axis})"),
        Node::MulPoly { poly } => format!("[{poly}]"),
        Node::Scalar { label: Some(l), .. } => l.clone(),
        Node::Scalar { value, label: None } => fmt_rational(value),
        Node::Named { name, .. } => name.clone(),
        Node::Sum { terms } => {
            let mut s = String::new();
            for (i, t) in terms.iter().enumerate() {
                let r = render(t);
                match (i, r.strip_prefix('-')) {
                    (0, _) => s.push_str(&r),
                    (_, Some(rest)) => {
                        s.push_str(" - ");
                        s.push_str(rest);
                    }
                    (_, None) => {
                        s.push_str(" + ");
                        s.push_str(&r);
                    }
                }
            }
            s
        }
        Node::Compose { factors } => {
            let mut parts: Vec<String> = Vec::new();
            let mut negative = false;
            for (i, fct) in factors.iter().enumerate() {
                let r = match fct.as_ref() {
                    Node::Sum { .. } => format!("({})", render(fct)),
                    Node::Scalar { value, label: None } if i == 0 && value.is_negative() => {
                        negative = true;
                        let mag = -value.clone();
                        if mag.is_one() {
                            continue;
                        }
                        fmt_rational(&mag)
                    }
                    _ => render(fct),
                };
                parts.push(r);
            }
            let body = parts.join(" ");
            if negative {
                format!("-{body}")
            } else {
                body
            }
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sqrt2_power {
            0 => write!(f, "{}", render(&self.node)),
            p => write!(f, "sqrt2^{p} ({})", render(&self.node)),
        }
    }
}

/// Expands one level of names, for printing a definition.
pub fn definition(op: &Operator) -> String {
    let shown = match op.node.as_ref() {
        Node::Named { body, .. } => render(body),
        other => render(other),
    };
    match op.sqrt2_power {
        0 => shown,
        p => format!("sqrt2^{p} ({shown})"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn p(s: &str) -> TriPoly {
        s.parse().unwrap()
    }

    #[test]
    fn identity_applies_trivially() {
        let q = p("3 * x1^2 x2 - 1/2 * x3 + 7");
        assert_eq!(Operator::identity().apply(&q).unwrap(), q);
    }

    #[test]
    fn linearity_of_sums() {
        let d = Operator::partial(Axis::X1);
        let op = d.scale(&int(2)) + d.clone();
        assert_eq!(op.apply(&p("1 * x1^2")).unwrap(), p("6 * x1"));
    }

    #[test]
    fn odd_power_is_rejected() {
        let half_step = Operator::mul_x(Axis::X1).with_sqrt2(-1);
        assert_eq!(
            half_step.apply(&TriPoly::one()),
            Err(Error::IrrationalScale { power: -1 })
        );
        let square = half_step.compose(&half_step);
        assert_eq!(square.apply(&TriPoly::one()).unwrap(), p("1/2 * x1^2"));
    }

    #[test]
    fn mixed_parity_sum_is_an_error() {
        let a = Operator::identity().with_sqrt2(1);
        let b = Operator::identity();
        assert_eq!(a.checked_add(&b), Err(Error::MixedScale { left: 1, right: 0 }));
    }

    #[test]
    fn same_parity_powers_fold() {
        let a = Operator::identity().with_sqrt2(2);
        let b = Operator::identity();
        let s = a + b;
        assert_eq!(s.sqrt2_power(), 0);
        assert_eq!(s.apply(&TriPoly::one()).unwrap(), TriPoly::constant(int(3)));
    }

    #[test]
    fn composition_is_right_to_left() {
        let x = Operator::mul_x(Axis::X1);
        let d = Operator::partial(Axis::X1);
        let q = p("1 * x1^2");
        assert_eq!((&x * &d).apply(&q).unwrap(), p("2 * x1^2"));
        assert_eq!((&d * &x).apply(&q).unwrap(), p("3 * x1^2"));
    }

    #[test]
    fn printer_layout() {
        let r2 = Operator::reflect(Axis::X2);
        let r3 = Operator::reflect(Axis::X3);
        let x2 = Operator::mul_x(Axis::X2);
        let x3 = Operator::mul_x(Axis::X3);
        let d2 = Operator::partial(Axis::X2).named("D2");
        let d3 = Operator::partial(Axis::X3).named("D3");
        let op = (&(&x2 * &d3) - &(&x3 * &d2)) * r2.clone()
            + Operator::labeled_scalar(rat(1, 3), "mu2") * r3.clone()
            + Operator::labeled_scalar(rat(1, 4), "mu3") * r2.clone()
            + (&r2 * &r3).scale(&rat(1, 2));
        assert_eq!(op.to_string(), "(x2 D3 - x3 D2) R2 + mu2 R3 + mu3 R2 + 1/2 R2 R3");
        assert_eq!((-(&r2 * &r3)).to_string(), "-R2 R3");
        assert_eq!(Operator::mul_x(Axis::X1).with_sqrt2(-1).to_string(), "sqrt2^-1 (x1)");
    }

    #[test]
    fn json_dump_is_tagged() {
        let op = Operator::labeled_scalar(rat(1, 3), "mu1") * Operator::reflect(Axis::X1);
        let js = op.to_json();
        assert_eq!(js["node"]["op"], "compose");
        assert_eq!(js["node"]["factors"][0]["value"], "1/3");
        assert_eq!(js["node"]["factors"][1]["axis"], 1);
        assert_eq!(js["sqrt2_power"], 0);
    }

    #[test]
    fn mutations_change_the_action() {
        let op = Operator::identity() + Operator::reflect(Axis::X1);
        let muts = op.sign_mutations();
        assert_eq!(muts.len(), 2);
        for (_, m) in muts {
            assert_ne!(m.apply(&p("1 * x1")).unwrap(), op.apply(&p("1 * x1")).unwrap());
        }
    }
}

//! Exact arithmetic in the rational function field Q(q).
//!
//! Scalars live in three layers:
//! - [`BigRat`]: arbitrary-precision rationals (re-exported from `num-rational`),
//! - [`QPoly`]: dense univariate polynomials in the formal variable q over [`BigRat`],
//! - [`QRat`]: quotients of two [`QPoly`] values kept in a canonical reduced form,
//!   so equality is plain coefficient-wise comparison.
//!
//! The parameter t is never a separate variable: it always enters as the monomial
//! q^k, so every scalar in the library is a single [`QRat`]. Finite q-Pochhammer
//! symbols and Gaussian binomial coefficients are provided here as well.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

/// Arbitrary-precision rational number, always stored reduced with a positive
/// denominator.
pub type BigRat = num_rational::BigRational;

/// Errors from scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QFieldError {
    /// Division of a [`QRat`] by zero.
    DivisionByZero,
    /// Evaluation of a [`QRat`] at a rational point where its denominator vanishes.
    PoleAtEvaluationPoint(BigRat),
    /// A JSON document did not match the expected schema.
    Malformed(String),
}

impl fmt::Display for QFieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QFieldError::DivisionByZero => write!(f, "division by zero in Q(q)"),
            QFieldError::PoleAtEvaluationPoint(q0) => {
                write!(f, "denominator vanishes at q = {q0}")
            }
            QFieldError::Malformed(msg) => write!(f, "malformed value: {msg}"),
        }
    }
}

impl std::error::Error for QFieldError {}

// ---------------------------------------------------------------------------
// QPoly
// ---------------------------------------------------------------------------

/// Univariate polynomial in q with [`BigRat`] coefficients, stored densely by
/// ascending power. The highest-degree stored coefficient is nonzero unless the
/// polynomial is zero (empty coefficient vector).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct QPoly {
    coeffs: Vec<BigRat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRat::one())
    }

    /// The polynomial q.
    pub fn q() -> Self {
        QPoly::monomial(BigRat::one(), 1)
    }

    pub fn constant(c: BigRat) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    /// c * q^deg.
    pub fn monomial(c: BigRat, deg: usize) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        let mut coeffs = vec![BigRat::zero(); deg + 1];
        coeffs[deg] = c;
        QPoly { coeffs }
    }

    /// Build from coefficients by ascending power, trimming trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn from_int(v: i64) -> Self {
        QPoly::constant(BigRat::from_integer(BigInt::from(v)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, deg: usize) -> BigRat {
        self.coeffs.get(deg).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i) + other.coeff(i));
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let mut coeffs = vec![BigRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(coeffs)
    }

    pub fn scalar_mul(&self, c: &BigRat) -> QPoly {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Horner evaluation at a rational point.
    pub fn eval(&self, q0: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q0 + c;
        }
        acc
    }

    /// Positive rational c such that self/c has coprime integer coefficients.
    /// Returns zero for the zero polynomial.
    pub fn content(&self) -> BigRat {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        BigRat::new_raw(num_gcd, den_lcm)
    }

    fn lowest_nonzero(&self) -> Option<&BigRat> {
        self.coeffs.iter().find(|c| !c.is_zero())
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &QPoly) -> QPoly {
        assert!(!d.is_zero(), "polynomial division by zero");
        if self.is_zero() {
            return QPoly::zero();
        }
        if d.is_one() {
            return self.clone();
        }
        let nd = d.coeffs.len() - 1;
        let ns = self.coeffs.len() - 1;
        assert!(ns >= nd, "exact_div: divisor degree exceeds dividend degree");
        let lead = &d.coeffs[nd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRat::zero(); ns - nd + 1];
        for i in (nd..=ns).rev() {
            if rem[i].is_zero() {
                continue;
            }
            let c = &rem[i] / lead;
            for j in 0..nd {
                let t = &c * &d.coeffs[j];
                rem[i - nd + j] -= t;
            }
            rem[i] = BigRat::zero();
            quot[i - nd] = c;
        }
        assert!(rem.iter().all(Zero::is_zero), "exact_div: nonzero remainder");
        QPoly::from_coeffs(quot)
    }

    /// Greatest common divisor over Q, returned as a primitive integer
    /// polynomial with positive leading coefficient (1 for coprime inputs).
    pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
        fn normalize(p: &QPoly) -> QPoly {
            let mut c = p.content();
            if p.coeffs.last().is_some_and(Signed::is_negative) {
                c = -c;
            }
            QPoly {
                coeffs: p.coeffs.iter().map(|a| a / &c).collect(),
            }
        }
        if a.is_zero() {
            return if b.is_zero() { QPoly::zero() } else { normalize(b) };
        }
        if b.is_zero() {
            return normalize(a);
        }
        let mut u = int_primitive(to_int_coeffs(a));
        let mut v = int_primitive(to_int_coeffs(b));
        if u.len() < v.len() {
            std::mem::swap(&mut u, &mut v);
        }
        // primitive pseudo-remainder sequence
        loop {
            let r = int_pseudo_rem(&u, &v);
            if r.is_empty() {
                break;
            }
            u = v;
            v = int_primitive(r);
        }
        if v.len() == 1 {
            return QPoly::one();
        }
        QPoly {
            coeffs: v.into_iter().map(BigRat::from_integer).collect(),
        }
    }
}

fn to_int_coeffs(p: &QPoly) -> Vec<BigInt> {
    let c = p.content();
    p.coeffs.iter().map(|a| (a / &c).to_integer()).collect()
}

fn int_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    if v.is_empty() {
        return v;
    }
    let mut g = BigInt::zero();
    for c in &v {
        g = g.gcd(c);
    }
    if v.last().unwrap().is_negative() {
        g = -g;
    }
    v.into_iter().map(|c| c / &g).collect()
}

/// Pseudo-remainder of a by b (b nonzero), up to sign and content.
fn int_pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        // r <- lb*r - lr*q^(dr-db)*b
        for c in r.iter_mut() {
            *c *= lb;
        }
        for (j, bc) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * bc;
        }
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        if r.is_empty() {
            break;
        }
    }
    r
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if deg == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if deg == 1 {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{deg}")?;
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// QRat
// ---------------------------------------------------------------------------

/// Element of Q(q) in canonical form: gcd(num, den) = 1 over Q, and den is a
/// primitive integer polynomial whose lowest-degree nonzero coefficient is
/// positive. Two values are equal iff their stored representations are equal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QRat {
    num: QPoly,
    den: QPoly,
}

impl QRat {
    /// Build num/den in canonical form; errors if den is zero.
    pub fn new(num: QPoly, den: QPoly) -> Result<QRat, QFieldError> {
        if den.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        Ok(QRat::normalized(num, den))
    }

    fn normalized(num: QPoly, den: QPoly) -> QRat {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return QRat::zero();
        }
        let g = QPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        QRat::scale_normalized(num, den)
    }

    /// Rescale a fraction already known to be reduced so the denominator is a
    /// primitive integer polynomial with positive lowest nonzero coefficient.
    fn scale_normalized(num: QPoly, den: QPoly) -> QRat {
        let mut c = den.content();
        if den.lowest_nonzero().is_some_and(Signed::is_negative) {
            c = -c;
        }
        if c.is_one() {
            return QRat { num, den };
        }
        let inv = c.recip();
        QRat {
            num: num.scalar_mul(&inv),
            den: den.scalar_mul(&inv),
        }
    }

    pub fn zero() -> QRat {
        QRat {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn one() -> QRat {
        QRat {
            num: QPoly::one(),
            den: QPoly::one(),
        }
    }

    /// The variable q.
    pub fn q() -> QRat {
        QRat {
            num: QPoly::q(),
            den: QPoly::one(),
        }
    }

    /// q^e for any integer e; negative e puts the power in the denominator.
    pub fn q_pow(e: i64) -> QRat {
        if e >= 0 {
            QRat {
                num: QPoly::monomial(BigRat::one(), e as usize),
                den: QPoly::one(),
            }
        } else {
            QRat {
                num: QPoly::one(),
                den: QPoly::monomial(BigRat::one(), (-e) as usize),
            }
        }
    }

    pub fn from_int(v: i64) -> QRat {
        QRat::from_bigrat(BigRat::from_integer(BigInt::from(v)))
    }

    pub fn from_bigrat(v: BigRat) -> QRat {
        QRat {
            num: QPoly::constant(v),
            den: QPoly::one(),
        }
    }

    pub fn from_qpoly(p: QPoly) -> QRat {
        QRat {
            num: p,
            den: QPoly::one(),
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a polynomial in q (denominator 1).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &QRat) -> QRat {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return QRat {
                    num,
                    den: QPoly::one(),
                };
            }
            return QRat::normalized(num, self.den.clone());
        }
        QRat::normalized(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &QRat) -> QRat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> QRat {
        QRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &QRat) -> QRat {
        if self.is_zero() || other.is_zero() {
            return QRat::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return QRat {
                num: self.num.mul(&other.num),
                den: QPoly::one(),
            };
        }
        // cross-cancel so the product is reduced without a second gcd pass
        let g1 = QPoly::gcd(&self.num, &other.den);
        let g2 = QPoly::gcd(&other.num, &self.den);
        let n1 = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.exact_div(&g1)
        };
        let d2 = if g1.is_one() {
            other.den.clone()
        } else {
            other.den.exact_div(&g1)
        };
        let n2 = if g2.is_one() {
            other.num.clone()
        } else {
            other.num.exact_div(&g2)
        };
        let d1 = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.exact_div(&g2)
        };
        QRat::scale_normalized(n1.mul(&n2), d1.mul(&d2))
    }

    /// Multiplicative inverse; errors on zero.
    pub fn checked_inv(&self) -> Result<QRat, QFieldError> {
        if self.is_zero() {
            return Err(QFieldError::DivisionByZero);
        }
        Ok(QRat::scale_normalized(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &QRat) -> Result<QRat, QFieldError> {
        Ok(self.mul(&other.checked_inv()?))
    }

    /// Division panicking on a zero divisor; use [`QRat::checked_div`] when the
    /// divisor is not known to be nonzero.
    pub fn div(&self, other: &QRat) -> QRat {
        self.checked_div(other)
            .expect("division by zero in Q(q)")
    }

    /// Integer power, with negative exponents inverting first.
    pub fn pow(&self, e: i64) -> QRat {
        if e == 0 {
            return QRat::one();
        }
        let base = if e < 0 {
            self.checked_inv().expect("zero to a negative power")
        } else {
            self.clone()
        };
        let mut result = QRat::one();
        let mut sq = base;
        let mut rem = e.unsigned_abs();
        while rem > 0 {
            if rem & 1 == 1 {
                result = result.mul(&sq);
            }
            rem >>= 1;
            if rem > 0 {
                sq = sq.mul(&sq);
            }
        }
        result
    }

    /// Exact evaluation at a rational q0; errors if the denominator vanishes.
    pub fn eval(&self, q0: &BigRat) -> Result<BigRat, QFieldError> {
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(QFieldError::PoleAtEvaluationPoint(q0.clone()));
        }
        Ok(self.num.eval(q0) / d)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "num": qpoly_to_json(&self.num),
            "den": qpoly_to_json(&self.den),
        })
    }

    pub fn from_json(v: &Value) -> Result<QRat, QFieldError> {
        let num = qpoly_from_json(
            v.get("num")
                .ok_or_else(|| QFieldError::Malformed("missing \"num\"".into()))?,
        )?;
        let den = qpoly_from_json(
            v.get("den")
                .ok_or_else(|| QFieldError::Malformed("missing \"den\"".into()))?,
        )?;
        QRat::new(num, den)
    }
}

fn qpoly_to_json(p: &QPoly) -> Value {
    Value::Array(
        p.coeffs()
            .iter()
            .map(|c| json!([c.numer().to_string(), c.denom().to_string()]))
            .collect(),
    )
}

fn qpoly_from_json(v: &Value) -> Result<QPoly, QFieldError> {
    let arr = v
        .as_array()
        .ok_or_else(|| QFieldError::Malformed("coefficient list is not an array".into()))?;
    let mut coeffs = Vec::with_capacity(arr.len());
    for pair in arr {
        let pair = pair
            .as_array()
            .filter(|p| p.len() == 2)
            .ok_or_else(|| QFieldError::Malformed("coefficient is not a [num, den] pair".into()))?;
        let numer: BigInt = pair[0]
            .as_str()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| QFieldError::Malformed("bad integer string".into()))?;
        let denom: BigInt = pair[1]
            .as_str()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| QFieldError::Malformed("bad integer string".into()))?;
        if denom.is_zero() {
            return Err(QFieldError::Malformed("zero denominator".into()));
        }
        coeffs.push(BigRat::new(numer, denom));
    }
    Ok(QPoly::from_coeffs(coeffs))
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &QRat {
            type Output = QRat;
            fn $method(self, rhs: &QRat) -> QRat {
                QRat::$method(self, rhs)
            }
        }
        impl std::ops::$trait for QRat {
            type Output = QRat;
            fn $method(self, rhs: QRat) -> QRat {
                QRat::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl std::ops::Neg for &QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat::neg(self)
    }
}

impl std::ops::Neg for QRat {
    type Output = QRat;
    fn neg(self) -> QRat {
        QRat::neg(&self)
    }
}

// ---------------------------------------------------------------------------
// q-Pochhammer and Gaussian binomials
// ---------------------------------------------------------------------------

/// Finite q-Pochhammer symbol (a;q)_count = prod_{s=0}^{count-1} (1 - a q^s).
pub fn pochhammer(a: &QRat, count: usize) -> QRat {
    let mut result = QRat::one();
    let mut shifted = a.clone();
    let q = QRat::q();
    for _ in 0..count {
        result = result.mul(&QRat::one().sub(&shifted));
        if result.is_zero() {
            return result;
        }
        shifted = shifted.mul(&q);
    }
    result
}

/// (q^start; q)_count, a common special case with integer start.
pub fn pochhammer_q(start: i64, count: usize) -> QRat {
    pochhammer(&QRat::q_pow(start), count)
}

/// Gaussian binomial coefficient [n choose r]_q as an exact value
/// (always a polynomial in q).
pub fn gauss_binomial(n: usize, r: usize) -> QRat {
    assert!(r <= n, "gauss_binomial: r > n");
    let num = pochhammer(&QRat::q(), n);
    let den = pochhammer(&QRat::q(), r).mul(&pochhammer(&QRat::q(), n - r));
    num.div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn qr(num: &[i64], den: &[i64]) -> QRat {
        let to_poly = |cs: &[i64]| {
            QPoly::from_coeffs(
                cs.iter()
                    .map(|&c| BigRat::from_integer(BigInt::from(c)))
                    .collect(),
            )
        };
        QRat::new(to_poly(num), to_poly(den)).unwrap()
    }

    fn big(n: i64, d: i64) -> BigRat {
        BigRat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn factor_cancellation() {
        // (1-q)/(1-q^2) * (1+q) = 1
        let a = qr(&[1, -1], &[1, 0, -1]);
        let b = qr(&[1, 1], &[1]);
        assert!(a.mul(&b).is_one());
    }

    #[test]
    fn additive_identity() {
        let q = QRat::q();
        assert_eq!(q.add(&QRat::zero()), q);
    }

    #[test]
    fn inverse_round_trip() {
        // 1/(1-q) * (1-q) = 1
        let one_minus_q = qr(&[1, -1], &[1]);
        let inv = QRat::one().checked_div(&one_minus_q).unwrap();
        assert!(inv.mul(&one_minus_q).is_one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            QRat::one().checked_div(&QRat::zero()),
            Err(QFieldError::DivisionByZero)
        );
    }

    #[test]
    fn canonical_form_is_unique() {
        // 2(1-q^2) / 2(1-q) and (1+q) reach identical representations
        let a = qr(&[2, 0, -2], &[2, -2]);
        let b = qr(&[1, 1], &[1]);
        assert_eq!(a, b);
        assert!(a.den().is_one());
        // denominator normalization: q/( -2 + 2q ) has primitive den with
        // positive lowest coefficient, so den = 1 - q and num = -q/2
        let c = qr(&[0, 1], &[-2, 2]);
        assert_eq!(c.den(), &QPoly::from_coeffs(vec![big(1, 1), big(-1, 1)]));
        assert_eq!(c.num(), &QPoly::from_coeffs(vec![big(0, 1), big(-1, 2)]));
    }

    #[test]
    fn pochhammer_two_factors() {
        // (q;q)_2 = (1-q)(1-q^2)
        let got = pochhammer(&QRat::q(), 2);
        let want = qr(&[1, -1], &[1]).mul(&qr(&[1, 0, -1], &[1]));
        assert_eq!(got, want);
    }

    #[test]
    fn pochhammer_empty_product() {
        assert!(pochhammer(&qr(&[5, 3], &[7]), 0).is_one());
    }

    #[test]
    fn pochhammer_vanishing_factor() {
        // a = q^-1: the s=1 factor is 1 - q^-1 * q = 0
        assert!(pochhammer(&QRat::q_pow(-1), 2).is_zero());
    }

    #[test]
    fn eval_simple() {
        // (1-q^2)/(1-q) at q=1/2 -> 3/2
        let a = qr(&[1, 0, -1], &[1, -1]);
        assert_eq!(a.eval(&big(1, 2)).unwrap(), big(3, 2));
        // q^3 at q=2 -> 8
        assert_eq!(QRat::q_pow(3).eval(&big(2, 1)).unwrap(), big(8, 1));
    }

    #[test]
    fn eval_pole_is_an_error() {
        let a = QRat::one().div(&qr(&[1, -1], &[1]));
        assert_eq!(
            a.eval(&big(1, 1)),
            Err(QFieldError::PoleAtEvaluationPoint(big(1, 1)))
        );
    }

    #[test]
    fn negative_q_powers() {
        let a = QRat::q_pow(-2);
        assert_eq!(a.mul(&QRat::q_pow(2)), QRat::one());
        assert_eq!(a.num(), &QPoly::one());
    }

    #[test]
    fn gauss_binomial_small() {
        // [2 1]_q = 1+q, [4 2]_q = 1+q+2q^2+q^3+q^4
        assert_eq!(gauss_binomial(2, 1), qr(&[1, 1], &[1]));
        assert_eq!(gauss_binomial(4, 2), qr(&[1, 1, 2, 1, 1], &[1]));
        assert!(gauss_binomial(5, 0).is_one());
    }

    #[test]
    fn json_round_trip() {
        let a = qr(&[1, 0, -3], &[2, 5]);
        let b = QRat::from_json(&a.to_json()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = QPoly::from_coeffs(vec![big(1, 1), big(1, 1)]); // 1+q
        let b = QPoly::from_coeffs(vec![big(1, 1), big(-1, 1)]); // 1-q
        assert!(QPoly::gcd(&a, &b).is_one());
    }

    // random QRat built from small-degree numerator/denominator data
    fn arb_qrat() -> impl Strategy<Value = QRat> {
        let coeffs = proptest::collection::vec(-4i64..5, 0..4);
        (coeffs.clone(), coeffs).prop_map(|(num, den)| {
            let to_poly = |cs: Vec<i64>| {
                QPoly::from_coeffs(cs.into_iter().map(|c| big(c, 1)).collect())
            };
            let mut d = to_poly(den);
            if d.is_zero() {
                d = QPoly::from_coeffs(vec![big(1, 1), big(2, 1)]);
            }
            QRat::new(to_poly(num), d).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_qrat(), b in arb_qrat(), c in arb_qrat()) {
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.sub(&a), QRat::zero());
            if !a.is_zero() {
                prop_assert_eq!(a.div(&a), QRat::one());
            }
        }

        #[test]
        fn pochhammer_splitting(a in arb_qrat(), m in 0usize..6, n in 0usize..6) {
            // (a;q)_{m+n} = (a;q)_m (a q^m;q)_n
            let lhs = pochhammer(&a, m + n);
            let rhs = pochhammer(&a, m)
                .mul(&pochhammer(&a.mul(&QRat::q_pow(m as i64)), n));
            prop_assert_eq!(lhs, rhs);
        }
    }
}

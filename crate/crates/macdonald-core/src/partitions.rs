//! Integer partitions, dominance order, arm/leg statistics, and the
//! closed-form scalar constants attached to a partition at t = q^k.
//!
//! A [`Partition`] carries the ambient number of variables n explicitly:
//! trailing zero parts matter for the product formulas indexed by 1..n
//! ([`b_lambda_product`], [`norm_formula`]), while the arm/leg form
//! [`b_lambda_armleg`] only sees the diagram. Keeping n on the value rules
//! out silent trailing-zero mismatches between the two.

use std::fmt;

use serde_json::{json, Value};

use crate::qfield::{pochhammer_q, QFieldError, QRat};

/// Weakly decreasing sequence of non-negative integers with at most `n`
/// parts. Positive parts are stored; trailing zeros up to `n` are implied.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

impl Partition {
    /// Build from parts (trailing zeros allowed, trimmed on construction).
    /// Panics if the sequence increases or has more than `n` positive parts.
    pub fn new(parts: &[usize], n: usize) -> Partition {
        assert!(
            parts.windows(2).all(|w| w[0] >= w[1]),
            "partition parts must be weakly decreasing: {parts:?}"
        );
        let len = parts.iter().take_while(|&&p| p > 0).count();
        assert!(
            len <= n,
            "partition {parts:?} has {len} parts but only {n} slots"
        );
        Partition {
            parts: parts[..len].to_vec(),
            n,
        }
    }

    pub fn empty(n: usize) -> Partition {
        Partition { parts: Vec::new(), n }
    }

    /// Same parts in a different ambient slot count.
    pub fn with_slots(&self, n: usize) -> Partition {
        Partition::new(&self.parts, n)
    }

    /// |λ|, the sum of the parts.
    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    /// l(λ), the number of positive parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Ambient number of variables.
    pub fn slots(&self) -> usize {
        self.n
    }

    /// λ_i with 1-indexed i; zero beyond the stored parts.
    pub fn part(&self, i: usize) -> usize {
        assert!(i >= 1, "parts are 1-indexed");
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// The positive parts.
    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// All n parts including trailing zeros.
    pub fn padded(&self) -> Vec<usize> {
        let mut v = self.parts.clone();
        v.resize(self.n, 0);
        v
    }

    /// Conjugate partition λ'_i = #{ j : λ_j ≥ i }, ambient in λ_1 slots.
    pub fn conjugate(&self) -> Partition {
        let cols = self.part(1);
        let parts: Vec<usize> = (1..=cols)
            .map(|i| self.parts.iter().take_while(|&&p| p >= i).count())
            .collect();
        Partition { parts, n: cols }
    }

    pub fn to_json(&self) -> Value {
        json!({ "parts": self.parts, "n": self.n })
    }

    pub fn from_json(v: &Value) -> Result<Partition, QFieldError> {
        let parts: Vec<usize> = v
            .get("parts")
            .and_then(Value::as_array)
            .ok_or_else(|| QFieldError::Malformed("missing \"parts\" array".into()))?
            .iter()
            .map(|p| p.as_u64().map(|p| p as usize))
            .collect::<Option<_>>()
            .ok_or_else(|| QFieldError::Malformed("parts must be non-negative integers".into()))?;
        let n = v
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| QFieldError::Malformed("missing \"n\"".into()))? as usize;
        if !parts.windows(2).all(|w| w[0] >= w[1]) {
            return Err(QFieldError::Malformed("parts must be weakly decreasing".into()));
        }
        if parts.iter().filter(|&&p| p > 0).count() > n {
            return Err(QFieldError::Malformed("more positive parts than slots".into()));
        }
        Ok(Partition::new(&parts, n))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.padded().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Square s = (i, j) of a diagram, 1-indexed row and column.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Cell {
        assert!(row >= 1 && col >= 1, "cells are 1-indexed");
        Cell { row, col }
    }
}

/// All cells of the diagram of λ in row-major order.
pub fn cells(lambda: &Partition) -> Vec<Cell> {
    let mut out = Vec::with_capacity(lambda.weight());
    for (i, &p) in lambda.parts().iter().enumerate() {
        for j in 1..=p {
            out.push(Cell { row: i + 1, col: j });
        }
    }
    out
}

/// Arm and leg lengths a(s) = λ_i − j, l(s) = λ'_j − i.
/// Panics when the cell lies outside the diagram.
pub fn arm_leg(lambda: &Partition, s: Cell) -> (usize, usize) {
    assert!(
        s.row >= 1 && s.col >= 1 && s.col <= lambda.part(s.row),
        "cell ({}, {}) outside the diagram of {lambda}",
        s.row,
        s.col
    );
    let conj_col = lambda.parts().iter().take_while(|&&p| p >= s.col).count();
    (lambda.part(s.row) - s.col, conj_col - s.row)
}

/// μ ⊴ λ in dominance order: equal weights and every prefix sum of λ
/// dominates the corresponding prefix sum of μ. False for unequal weights.
pub fn dominance_leq(mu: &Partition, lambda: &Partition) -> bool {
    if mu.weight() != lambda.weight() {
        return false;
    }
    let mut sum_mu = 0usize;
    let mut sum_lam = 0usize;
    for i in 1..=mu.len().max(lambda.len()) {
        sum_mu += mu.part(i);
        sum_lam += lambda.part(i);
        if sum_mu > sum_lam {
            return false;
        }
    }
    true
}

/// True when the two partitions are comparable in dominance order.
pub fn dominance_comparable(a: &Partition, b: &Partition) -> bool {
    dominance_leq(a, b) || dominance_leq(b, a)
}

/// Strict dominance μ ⊲ λ.
pub fn dominance_lt(mu: &Partition, lambda: &Partition) -> bool {
    mu.parts() != lambda.parts() && dominance_leq(mu, lambda)
}

fn one_minus_qpow(e: i64) -> QRat {
    QRat::one().sub(&QRat::q_pow(e))
}

/// b_λ via arm/leg statistics:
/// prod over cells of (1 − q^{a(s)} t^{l(s)+1}) / (1 − q^{a(s)+1} t^{l(s)})
/// with t = q^k. Independent of the ambient slot count.
pub fn b_lambda_armleg(lambda: &Partition, k: usize) -> QRat {
    assert!(k >= 1, "k must be a positive integer");
    let mut result = QRat::one();
    for s in cells(lambda) {
        let (a, l) = arm_leg(lambda, s);
        let num = one_minus_qpow((a + k * (l + 1)) as i64);
        let den = one_minus_qpow((a + 1 + k * l) as i64);
        result = result.mul(&num).div(&den);
    }
    result
}

/// b_λ as a product of finite q-Pochhammer ratios over pairs 1 ≤ i < j ≤ n
/// and rows 1 ≤ i ≤ n. Depends on the ambient n through trailing zeros but
/// agrees with [`b_lambda_armleg`] for every n ≥ l(λ).
pub fn b_lambda_product(lambda: &Partition, n: usize, k: usize) -> QRat {
    assert!(k >= 1, "k must be a positive integer");
    assert!(lambda.len() <= n, "partition has more parts than slots");
    let li = |i: usize| lambda.part(i) as i64;
    let kk = k as i64;
    let mut result = QRat::one();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let d = li(i) - li(j);
            let ij = (j - i) as i64;
            let num = pochhammer_q(d + 1 + (ij - 1) * kk, k - 1);
            let den = pochhammer_q(d + 1 + ij * kk, k - 1);
            result = result.mul(&num).div(&den);
        }
    }
    let qq = pochhammer_q(1, k - 1);
    for i in 1..=n {
        let num = pochhammer_q(li(i) + 1 + kk * (n - i) as i64, k - 1);
        result = result.mul(&num).div(&qq);
    }
    result
}

/// The closed-form norm ⟨P_λ, P_λ⟩:
/// prod over 1 ≤ i < j ≤ n and 1 ≤ r ≤ k−1 of
/// (1 − q^{λ_i−λ_j+r} t^{j−i}) / (1 − q^{λ_i−λ_j−r} t^{j−i}), t = q^k.
/// The denominator exponent λ_i−λ_j−r+k(j−i) is always ≥ 1, so no factor
/// vanishes.
pub fn norm_formula(lambda: &Partition, n: usize, k: usize) -> QRat {
    assert!(k >= 1, "k must be a positive integer");
    assert!(lambda.len() <= n, "partition has more parts than slots");
    let li = |i: usize| lambda.part(i) as i64;
    let kk = k as i64;
    let mut result = QRat::one();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let d = li(i) - li(j);
            let shift = kk * (j - i) as i64;
            for r in 1..=(kk - 1) {
                result = result
                    .mul(&one_minus_qpow(d + r + shift))
                    .div(&one_minus_qpow(d - r + shift));
            }
        }
    }
    result
}

/// The same norm as a ratio of finite q-Pochhammer symbols:
/// prod over i < j of (q^{λ_i−λ_j+1+(j−i)k};q)_{k−1} / (q^{λ_i−λ_j+1+(j−i−1)k};q)_{k−1}.
pub fn norm_formula_poch(lambda: &Partition, n: usize, k: usize) -> QRat {
    assert!(k >= 1, "k must be a positive integer");
    assert!(lambda.len() <= n, "partition has more parts than slots");
    let li = |i: usize| lambda.part(i) as i64;
    let kk = k as i64;
    let mut result = QRat::one();
    for i in 1..=n {
        for j in (i + 1)..=n {
            let d = li(i) - li(j);
            let ij = (j - i) as i64;
            let num = pochhammer_q(d + 1 + ij * kk, k - 1);
            let den = pochhammer_q(d + 1 + (ij - 1) * kk, k - 1);
            result = result.mul(&num).div(&den);
        }
    }
    result
}

/// All partitions of the given weight with at most `max_len` parts, in
/// reverse-lexicographic order (largest first). This order is a linear
/// extension of dominance restricted to the weight class, which downstream
/// Gram-Schmidt relies on. Each result carries `max_len` ambient slots.
pub fn enumerate_partitions(weight: usize, max_len: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn go(remaining: usize, max_part: usize, slots_left: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        if slots_left == 0 {
            return;
        }
        // smallest admissible first part still lets the rest fit
        let low = remaining.div_ceil(slots_left);
        for p in (low..=max_part.min(remaining)).rev() {
            current.push(p);
            go(remaining - p, p, slots_left - 1, current, out);
            current.pop();
        }
    }
    let mut raw = Vec::new();
    go(weight, weight.max(1), max_len, &mut current, &mut raw);
    for parts in raw {
        out.push(Partition::new(&parts, max_len));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize], n: usize) -> Partition {
        Partition::new(parts, n)
    }

    fn qr(num: &[i64], den: &[i64]) -> QRat {
        use crate::qfield::{BigRat, QPoly};
        use num_bigint::BigInt;
        let to_poly = |cs: &[i64]| {
            QPoly::from_coeffs(
                cs.iter()
                    .map(|&c| BigRat::from_integer(BigInt::from(c)))
                    .collect(),
            )
        };
        QRat::new(to_poly(num), to_poly(den)).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(p(&[3, 1], 2).conjugate().parts(), &[2, 1, 1]);
        assert_eq!(p(&[2, 1], 3).conjugate().parts(), &[2, 1]);
        assert!(p(&[], 4).conjugate().is_empty());
    }

    #[test]
    fn conjugate_is_an_involution() {
        for w in 0..=8 {
            for lam in enumerate_partitions(w, w.max(1)) {
                assert_eq!(lam.conjugate().conjugate().parts(), lam.parts());
            }
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p(&[2, 1, 1], 4), &p(&[2, 2], 4)));
        let a = p(&[2, 2, 2], 6);
        let b = p(&[3, 1, 1, 1], 6);
        assert!(!dominance_leq(&a, &b));
        assert!(!dominance_leq(&b, &a));
        assert!(!dominance_comparable(&a, &b));
        let c = p(&[2, 1], 3);
        assert!(dominance_leq(&c, &c));
        // unequal weights are never comparable
        assert!(!dominance_leq(&p(&[1], 2), &p(&[2], 2)));
    }

    #[test]
    fn dominance_is_a_partial_order() {
        for w in 0..=6 {
            let all = enumerate_partitions(w, w.max(1));
            for a in &all {
                assert!(dominance_leq(a, a));
                for b in &all {
                    if dominance_leq(a, b) && dominance_leq(b, a) {
                        assert_eq!(a.parts(), b.parts());
                    }
                    for c in &all {
                        if dominance_leq(a, b) && dominance_leq(b, c) {
                            assert!(dominance_leq(a, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn arm_leg_examples() {
        assert_eq!(arm_leg(&p(&[2], 1), Cell::new(1, 1)), (1, 0));
        assert_eq!(arm_leg(&p(&[1], 1), Cell::new(1, 1)), (0, 0));
        assert_eq!(arm_leg(&p(&[2, 2], 2), Cell::new(1, 1)), (1, 1));
    }

    #[test]
    #[should_panic(expected = "outside the diagram")]
    fn arm_leg_rejects_outside_cell() {
        arm_leg(&p(&[2, 1], 2), Cell::new(2, 2));
    }

    #[test]
    fn b_lambda_armleg_examples() {
        // single cell: (1 - q^k)/(1 - q)
        for k in 1..=4 {
            let got = b_lambda_armleg(&p(&[1], 1), k);
            let mut want_num = vec![1i64];
            want_num.resize(k, 0);
            want_num.push(-1);
            assert_eq!(got, qr(&want_num, &[1, -1]));
        }
        assert!(b_lambda_armleg(&p(&[], 3), 2).is_one());
        // λ=(2): (1 - q^{k+1})(1 - q^k) / ((1 - q^2)(1 - q)) at k=2
        let got = b_lambda_armleg(&p(&[2], 1), 2);
        let want = qr(&[1, 0, 0, -1], &[1])
            .mul(&qr(&[1, 0, -1], &[1]))
            .div(&qr(&[1, 0, -1], &[1]).mul(&qr(&[1, -1], &[1])));
        assert_eq!(got, want);
    }

    #[test]
    fn b_lambda_product_examples() {
        // λ=(1,0), n=2, k=2 -> 1 + q
        assert_eq!(b_lambda_product(&p(&[1], 2), 2, 2), qr(&[1, 1], &[1]));
        assert!(b_lambda_product(&p(&[], 3), 3, 1).is_one());
        assert_eq!(
            b_lambda_product(&p(&[2, 1], 2), 2, 2),
            b_lambda_armleg(&p(&[2, 1], 2), 2)
        );
    }

    #[test]
    fn b_lambda_forms_agree() {
        for w in 0..=6 {
            for k in 1..=3 {
                for n in 1..=4 {
                    for lam in enumerate_partitions(w, n) {
                        assert_eq!(
                            b_lambda_armleg(&lam, k),
                            b_lambda_product(&lam, n, k),
                            "b_lambda mismatch at lambda={lam} n={n} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn norm_formula_examples() {
        assert!(norm_formula(&p(&[], 2), 2, 1).is_one());
        // λ=0, n=2, k=2 -> 1 + q + q^2
        assert_eq!(norm_formula(&p(&[], 2), 2, 2), qr(&[1, 1, 1], &[1]));
        // λ=(1,0), n=2, k=2 -> 1 + q^2
        assert_eq!(norm_formula(&p(&[1], 2), 2, 2), qr(&[1, 0, 1], &[1]));
        assert_eq!(norm_formula_poch(&p(&[], 2), 2, 2), qr(&[1, 1, 1], &[1]));
        assert!(norm_formula_poch(&p(&[], 5), 5, 1).is_one());
        assert_eq!(
            norm_formula_poch(&p(&[2, 1], 3), 3, 3),
            norm_formula(&p(&[2, 1], 3), 3, 3)
        );
    }

    #[test]
    fn norm_forms_agree() {
        for w in 0..=6 {
            for k in 1..=3 {
                for n in 1..=4 {
                    for lam in enumerate_partitions(w, n) {
                        assert_eq!(
                            norm_formula(&lam, n, k),
                            norm_formula_poch(&lam, n, k),
                            "norm form mismatch at lambda={lam} n={n} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn enumeration_order_and_contents() {
        let got: Vec<Vec<usize>> = enumerate_partitions(3, 2)
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(got, vec![vec![3], vec![2, 1]]);
        let got: Vec<Vec<usize>> = enumerate_partitions(4, 4)
            .iter()
            .map(|p| p.parts().to_vec())
            .collect();
        assert_eq!(
            got,
            vec![
                vec![4],
                vec![3, 1],
                vec![2, 2],
                vec![2, 1, 1],
                vec![1, 1, 1, 1]
            ]
        );
        let empty = enumerate_partitions(0, 3);
        assert_eq!(empty.len(), 1);
        assert!(empty[0].is_empty());
    }

    #[test]
    fn enumeration_extends_dominance() {
        for w in 0..=7 {
            let all = enumerate_partitions(w, w.max(1));
            for (a, earlier) in all.iter().enumerate() {
                for later in &all[a + 1..] {
                    assert!(
                        !dominance_lt(earlier, later),
                        "{earlier} listed before {later} but strictly dominated by it"
                    );
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let lam = p(&[2, 1], 3);
        let v = lam.to_json();
        assert_eq!(v, serde_json::json!({"parts": [2, 1], "n": 3}));
        assert_eq!(Partition::from_json(&v).unwrap(), lam);
        assert!(Partition::from_json(&serde_json::json!({"parts": [1, 2], "n": 3})).is_err());
        assert!(Partition::from_json(&serde_json::json!({"parts": [1, 1, 1], "n": 2})).is_err());
    }
}

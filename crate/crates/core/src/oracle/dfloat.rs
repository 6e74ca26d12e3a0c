//! Split-based double-float arithmetic for the series reference evaluator.
//!
//! Deliberately distinct from the compensated arithmetic used elsewhere in
//! the crate: products are split with the Dekker/Veltkamp constant rather
//! than a fused multiply-add, and sums use the branch form of the error-free
//! transform. The verification path therefore shares no rounding-error
//! machinery with the code it checks.

#[derive(Debug, Clone, Copy)]
pub(crate) struct TwoFloat {
    pub val: f64,
    pub err: f64,
}

/// 2^27 + 1, splits a double into two 26-bit halves.
const SPLITTER: f64 = 134_217_729.0;

impl TwoFloat {
    pub const ONE: TwoFloat = TwoFloat { val: 1.0, err: 0.0 };

    #[cfg(test)]
    pub fn from_f64(x: f64) -> Self {
        TwoFloat { val: x, err: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.val + self.err
    }

    pub fn neg(self) -> Self {
        TwoFloat {
            val: -self.val,
            err: -self.err,
        }
    }

    pub fn add(self, rhs: TwoFloat) -> Self {
        let s = branch_sum(self.val, rhs.val);
        let t = branch_sum(self.err, rhs.err);
        let mut lo = s.err + t.val;
        let hi = s.val + lo;
        lo = (s.val - hi) + lo + t.err;
        renorm(hi, lo)
    }

    pub fn mul(self, rhs: TwoFloat) -> Self {
        let p = split_prod(self.val, rhs.val);
        let lo = p.err + self.val * rhs.err + self.err * rhs.val;
        renorm(p.val, lo)
    }

    pub fn mul_f64(self, rhs: f64) -> Self {
        let p = split_prod(self.val, rhs);
        renorm(p.val, p.err + self.err * rhs)
    }

    pub fn div(self, rhs: TwoFloat) -> Self {
        let q1 = self.val / rhs.val;
        let r = self.add(rhs.mul_f64(q1).neg());
        let q2 = r.val / rhs.val;
        let r2 = r.add(rhs.mul_f64(q2).neg());
        let q3 = r2.val / rhs.val;
        let s = branch_sum(q1, q2);
        renorm(s.val, s.err + q3)
    }
}

fn renorm(hi: f64, lo: f64) -> TwoFloat {
    let s = hi + lo;
    TwoFloat {
        val: s,
        err: (hi - s) + lo,
    }
}

/// Error-free sum, branch form: assumes nothing about magnitudes, tests them.
pub(crate) fn branch_sum(a: f64, b: f64) -> TwoFloat {
    let s = a + b;
    let err = if a.abs() >= b.abs() {
        b - (s - a)
    } else {
        a - (s - b)
    };
    TwoFloat { val: s, err }
}

/// Error-free product via Veltkamp splitting.
pub(crate) fn split_prod(a: f64, b: f64) -> TwoFloat {
    let p = a * b;
    let (ah, al) = split(a);
    let (bh, bl) = split(b);
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    TwoFloat { val: p, err }
}

fn split(a: f64) -> (f64, f64) {
    let t = SPLITTER * a;
    let hi = t - (t - a);
    (hi, a - hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_prod_captures_rounding_error() {
        // (1 + 2^-27)^2 = 1 + 2^-26 + 2^-54; the low word is exactly 2^-54.
        let a = 1.0 + (2f64).powi(-27);
        let p = split_prod(a, a);
        assert_eq!(p.val, 1.0 + (2f64).powi(-26));
        assert_eq!(p.err, (2f64).powi(-54));
    }

    #[test]
    fn branch_sum_is_exact() {
        let s = branch_sum(1.0, 2f64.powi(-60));
        assert_eq!(s.val, 1.0);
        assert_eq!(s.err, 2f64.powi(-60));
        let t = branch_sum(2f64.powi(-60), 1.0);
        assert_eq!(t.err, 2f64.powi(-60));
    }

    #[test]
    fn division_round_trip() {
        let a = TwoFloat::from_f64(1.0).div(TwoFloat::from_f64(3.0));
        let back = a.mul_f64(3.0);
        assert!((back.to_f64() - 1.0).abs() < 1e-30);
    }
}

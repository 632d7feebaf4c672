//! Minimal double-double arithmetic (error-free transformations).
//!
//! Long cocycle products and solution recursions accumulate rounding in
//! the tiny `det - 1` and Wronskian residuals; carrying a compensation
//! term keeps those residuals near 1e-13 instead of drifting with the
//! square of the product norm. Only the handful of operations the
//! recursions need are implemented.

/// A number `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const SPLIT: f64 = 134_217_729.0; // 2^27 + 1, Dekker splitting constant

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // Requires |a| >= |b|.
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    // Dekker's product; safe while |a|, |b| < 2^996.
    let p = a * b;
    let a1 = a * SPLIT;
    let ah = a1 - (a1 - a);
    let al = a - ah;
    let b1 = b * SPLIT;
    let bh = b1 - (b1 - b);
    let bl = b - bh;
    let err = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    Dd { hi: p, lo: err }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let e = s.lo + self.lo + o.lo;
        quick_two_sum(s.hi, e)
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(Dd { hi: -o.hi, lo: -o.lo })
    }

    #[inline]
    pub fn mul_f64(self, f: f64) -> Dd {
        let p = two_prod(self.hi, f);
        let e = p.lo + self.lo * f;
        quick_two_sum(p.hi, e)
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let p = two_prod(self.hi, o.hi);
        let e = p.lo + self.hi * o.lo + self.lo * o.hi;
        quick_two_sum(p.hi, e)
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn scale_exp2(self, k: i32) -> Dd {
        let s = (k as f64).exp2();
        Dd { hi: self.hi * s, lo: self.lo * s }
    }
}

//! Double-double arithmetic: unevaluated sums of two `f64`s giving ~106 bits
//! of significand.
//!
//! This backs the extended-precision oracle. Algorithms are the classic
//! error-free transformations (Dekker/Knuth two-sum, FMA two-product) and the
//! usual Newton/Taylor kernels for `exp`, `ln`, `sqrt`; cf. the QD library of
//! Hida, Li & Bailey.

use std::f64::consts::LN_2;

/// ln 2 to double-double precision.
pub const LN2_DD: Dd = Dd {
    hi: 6.931471805599452862e-1,
    lo: 2.319046813846299558e-17,
};

/// A double-double number `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum: returns (s, e) with s = fl(a+b), s + e = a + b exactly.
#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    let e = (a - (s - v)) + (b - v);
    (s, e)
}

/// Error-free sum assuming |a| >= |b|.
#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

/// Error-free product via FMA: returns (p, e) with p + e = a*b exactly.
#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl From<f64> for Dd {
    #[inline]
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }

    /// Exact sum of two `f64`s as a double-double.
    #[inline]
    pub fn from_sum(a: f64, b: f64) -> Self {
        let (h, l) = two_sum(a, b);
        Dd { hi: h, lo: l }
    }

    /// Exact product of two `f64`s as a double-double.
    #[inline]
    pub fn from_prod(a: f64, b: f64) -> Self {
        let (h, l) = two_prod(a, b);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn neg(self) -> Self {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.hi == 0.0 && self.lo == 0.0
    }

    #[inline]
    pub fn add(self, rhs: Dd) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs.hi);
        let (t1, t2) = two_sum(self.lo, rhs.lo);
        let (s1, s2b) = quick_two_sum(s1, s2 + t1);
        let (h, l) = quick_two_sum(s1, s2b + t2);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn add_f64(self, rhs: f64) -> Self {
        let (s1, s2) = two_sum(self.hi, rhs);
        let (h, l) = quick_two_sum(s1, s2 + self.lo);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn sub(self, rhs: Dd) -> Self {
        self.add(rhs.neg())
    }

    #[inline]
    pub fn sub_f64(self, rhs: f64) -> Self {
        self.add_f64(-rhs)
    }

    #[inline]
    pub fn mul(self, rhs: Dd) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs.hi);
        let p2 = p2 + (self.hi * rhs.lo + self.lo * rhs.hi);
        let (h, l) = quick_two_sum(p1, p2);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn mul_f64(self, rhs: f64) -> Self {
        let (p1, p2) = two_prod(self.hi, rhs);
        let (h, l) = quick_two_sum(p1, p2 + self.lo * rhs);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn div(self, rhs: Dd) -> Self {
        let q1 = self.hi / rhs.hi;
        let r = self.sub(rhs.mul_f64(q1));
        let q2 = r.hi / rhs.hi;
        let r = r.sub(rhs.mul_f64(q2));
        let q3 = r.hi / rhs.hi;
        let (s, e) = quick_two_sum(q1, q2);
        let (h, l) = quick_two_sum(s, e + q3);
        Dd { hi: h, lo: l }
    }

    #[inline]
    pub fn div_f64(self, rhs: f64) -> Self {
        self.div(Dd::from(rhs))
    }

    #[inline]
    pub fn recip(self) -> Self {
        Dd::ONE.div(self)
    }

    #[inline]
    pub fn sqr(self) -> Self {
        self.mul(self)
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn ldexp(self, n: i32) -> Self {
        let f = (2.0f64).powi(n);
        Dd { hi: self.hi * f, lo: self.lo * f }
    }

    pub fn sqrt(self) -> Self {
        if self.is_zero() {
            return Dd::ZERO;
        }
        let y0 = self.hi.sqrt();
        // one Newton step on y^2 = x: y1 = y0 + (x - y0^2)/(2 y0)
        let r = self.sub(Dd::from_prod(y0, y0));
        Dd::from(y0).add(r.div_f64(2.0 * y0))
    }

    /// `e^self`, accurate to a few units in the 104-bit significand.
    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::from(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / LN_2).round();
        let r = self.sub(LN2_DD.mul_f64(k));
        // scale into |r| <= ln2/128 and use a degree-12 Taylor polynomial
        const M: i32 = 6;
        let r = r.ldexp(-M);
        // reciprocal factorials 1/12! down to 1/2!, double-double accurate
        const INV_FACT: [Dd; 11] = [
            Dd { hi: 2.08767569878681e-9, lo: -1.20734505911326e-25 },
            Dd { hi: 2.505210838544172e-8, lo: -1.448814070935912e-24 },
            Dd { hi: 2.755731922398589e-7, lo: 2.3767714622250297e-23 },
            Dd { hi: 2.7557319223985893e-6, lo: -1.858393274046472e-22 },
            Dd { hi: 2.48015873015873e-5, lo: 2.1511947866775882e-23 },
            Dd { hi: 1.984126984126984e-4, lo: 1.7209558293420705e-22 },
            Dd { hi: 1.388888888888889e-3, lo: -5.300543954373577e-20 },
            Dd { hi: 8.333333333333333e-3, lo: 1.1564823173178714e-19 },
            Dd { hi: 4.1666666666666664e-2, lo: 2.3129646346357427e-18 },
            Dd { hi: 1.6666666666666666e-1, lo: 9.25185853854297e-18 },
            Dd { hi: 0.5, lo: 0.0 },
        ];
        let mut p = INV_FACT[0];
        for &c in &INV_FACT[1..] {
            p = p.mul(r).add(c);
        }
        p = p.mul(r).add_f64(1.0);
        p = p.mul(r).add_f64(1.0);
        for _ in 0..M {
            p = p.sqr();
        }
        p.ldexp(k as i32)
    }

    /// Natural log via Newton iteration on `exp`.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0, "ln of non-positive double-double");
        let mut y = Dd::from(self.hi.ln());
        for _ in 0..2 {
            // y <- y + x e^{-y} - 1
            y = y.add(self.mul(y.neg().exp())).sub_f64(1.0);
        }
        y
    }

    /// `ln(1 + self)`, keeping relative accuracy for tiny arguments.
    pub fn ln_1p(self) -> Self {
        if self.abs().hi < 1e-3 {
            // alternating series u - u^2/2 + ... - u^14/14; remainder < |u|^15/15
            let mut acc = Dd::ZERO;
            for k in (1..=14).rev() {
                let term = if k % 2 == 1 { 1.0 / k as f64 } else { -1.0 / k as f64 };
                acc = acc.mul(self).add_f64(term);
            }
            acc.mul(self)
        } else {
            self.add_f64(1.0).ln()
        }
    }

    /// `self^e` for positive `self`, exponent in double-double.
    pub fn powdd(self, e: Dd) -> Self {
        if e.is_zero() {
            return Dd::ONE;
        }
        self.ln().mul(e).exp()
    }

    /// Total order on normalized double-doubles.
    #[inline]
    pub fn lt(self, rhs: Dd) -> bool {
        self.hi < rhs.hi || (self.hi == rhs.hi && self.lo < rhs.lo)
    }
}

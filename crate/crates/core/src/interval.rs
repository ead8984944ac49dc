//! Verified interval arithmetic over machine doubles.
//!
//! Every operation returns an enclosure of the exact real result. Endpoints
//! are computed in round-to-nearest and then pushed outward to the adjacent
//! representable number whenever the operation cannot be shown to be exact.
//! Exactness of `+ - * /` and `sqrt` is detected with error-free
//! transformations (two-sum and fused multiply-add residuals), so results
//! such as `[1,2] + [3,4]` stay tight. Library transcendental functions are
//! widened by two ulps on each side, which covers the documented accuracy of
//! common libm implementations.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised by interval operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero: {divisor}")]
    DivisionByZeroInterval { divisor: Interval },
    #[error("{function} is undefined on part of {argument}")]
    DomainViolation {
        function: &'static str,
        argument: Interval,
    },
    #[error("interval endpoint is not finite")]
    NonFinite,
    #[error("inverted interval [{lo}, {hi}]")]
    Inverted { lo: f64, hi: f64 },
    #[error("result overflows the representable range")]
    Overflow,
    #[error("malformed decimal literal `{0}`")]
    BadLiteral(String),
    #[error("interval box must have at least one component")]
    EmptyBox,
}

pub type Result<T, E = IntervalError> = std::result::Result<T, E>;

/// Below this magnitude the FMA residual may be inexact because of underflow.
const RESIDUAL_SAFE_MIN: f64 = 1.0e-290;

/// Number of ulps added around libm results.
const LIBM_ULPS: u32 = 2;

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

fn down_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_down();
    }
    x
}

fn up_n(mut x: f64, n: u32) -> f64 {
    for _ in 0..n {
        x = x.next_up();
    }
    x
}

/// A round-to-nearest result together with the position of the exact value
/// relative to it (`None` when that cannot be determined).
type Rounded = (f64, Option<Ordering>);

fn sign(x: f64) -> Ordering {
    x.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

fn sum_rounded(a: f64, b: f64) -> Rounded {
    let s = a + b;
    if !s.is_finite() {
        return (s, None);
    }
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, Some(sign(err)))
}

fn product_rounded(a: f64, b: f64) -> Rounded {
    let p = a * b;
    if a == 0.0 || b == 0.0 {
        return (p, Some(Ordering::Equal));
    }
    if !p.is_finite() || p.abs() < RESIDUAL_SAFE_MIN {
        return (p, None);
    }
    (p, Some(sign(a.mul_add(b, -p))))
}

fn quotient_rounded(a: f64, b: f64) -> Rounded {
    let q = a / b;
    if a == 0.0 {
        return (q, Some(Ordering::Equal));
    }
    if !q.is_finite() || q.abs() < RESIDUAL_SAFE_MIN || a.abs() < RESIDUAL_SAFE_MIN {
        return (q, None);
    }
    // a/b - q = (a - q*b) / b
    let r = (-q).mul_add(b, a);
    let dir = if b > 0.0 { sign(r) } else { sign(r).reverse() };
    (q, Some(dir))
}

fn lower((v, dir): Rounded) -> f64 {
    match dir {
        Some(Ordering::Equal | Ordering::Greater) => v,
        _ => down(v),
    }
}

fn upper((v, dir): Rounded) -> f64 {
    match dir {
        Some(Ordering::Equal | Ordering::Less) => v,
        _ => up(v),
    }
}

/// Closed interval `[lo, hi]` with finite representable endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl Interval {
    /// Enclosure of π.
    pub const PI: Interval = Interval {
        lo: std::f64::consts::PI,
        hi: 3.1415926535897936,
    };

    /// Enclosure of Euler's number.
    pub const E: Interval = Interval {
        lo: std::f64::consts::E,
        hi: 2.7182818284590455,
    };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::NonFinite);
        }
        if lo > hi {
            return Err(IntervalError::Inverted { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// Degenerate interval `[v, v]`.
    pub fn point(v: f64) -> Result<Self> {
        Interval::new(v, v)
    }

    /// Builds an interval from endpoints that came out of a computation,
    /// mapping infinities to an overflow error.
    fn checked(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::NonFinite);
        }
        if !lo.is_finite() || !hi.is_finite() {
            return Err(IntervalError::Overflow);
        }
        debug_assert!(lo <= hi);
        Ok(Interval { lo, hi })
    }

    /// Tightest enclosure of a decimal literal such as `0.1` or `2.5e-3`.
    ///
    /// Exactly representable literals give a degenerate interval; all
    /// others are bracketed by the two representable neighbours of the
    /// nearest double.
    pub fn from_decimal(text: &str) -> Result<Self> {
        let bad = || IntervalError::BadLiteral(text.to_string());
        let v: f64 = text.parse().map_err(|_| bad())?;
        if !v.is_finite() {
            return Err(IntervalError::Overflow);
        }
        let (digits, exp10) = parse_decimal(text).ok_or_else(bad)?;
        if decimal_equals(&digits, exp10, v) {
            Interval::point(v)
        } else {
            Interval::checked(down(v), up(v))
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> f64 {
        upper(sum_rounded(self.hi, -self.lo))
    }

    /// Representable midpoint, always inside the interval.
    pub fn midpt(&self) -> f64 {
        if self.lo == self.hi {
            return self.lo;
        }
        let m = 0.5 * self.lo + 0.5 * self.hi;
        m.clamp(self.lo, self.hi)
    }

    /// Upper bound on the distance from [`midpt`](Self::midpt) to either endpoint.
    pub fn rad(&self) -> f64 {
        let m = self.midpt();
        let right = upper(sum_rounded(self.hi, -m));
        let left = upper(sum_rounded(m, -self.lo));
        right.max(left)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }

    pub fn add(&self, other: &Interval) -> Result<Interval> {
        Interval::checked(
            lower(sum_rounded(self.lo, other.lo)),
            upper(sum_rounded(self.hi, other.hi)),
        )
    }

    pub fn sub(&self, other: &Interval) -> Result<Interval> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Interval) -> Result<Interval> {
        let pairs = [
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            let p = product_rounded(a, b);
            lo = lo.min(lower(p));
            hi = hi.max(upper(p));
        }
        Interval::checked(lo, hi)
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByZeroInterval { divisor: *other });
        }
        let pairs = [
            (self.lo, other.lo),
            (self.lo, other.hi),
            (self.hi, other.lo),
            (self.hi, other.hi),
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for (a, b) in pairs {
            let q = quotient_rounded(a, b);
            lo = lo.min(lower(q));
            hi = hi.max(upper(q));
        }
        Interval::checked(lo, hi)
    }

    pub fn abs(&self) -> Interval {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            self.neg()
        } else {
            Interval {
                lo: 0.0,
                hi: (-self.lo).max(self.hi),
            }
        }
    }

    pub fn sqr(&self) -> Result<Interval> {
        let a = self.abs();
        let lo = if a.lo == 0.0 {
            0.0
        } else {
            lower(product_rounded(a.lo, a.lo)).max(0.0)
        };
        Interval::checked(lo, upper(product_rounded(a.hi, a.hi)))
    }

    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(IntervalError::DomainViolation {
                function: "sqrt",
                argument: *self,
            });
        }
        let root = |x: f64| -> Rounded {
            let r = x.sqrt();
            if x == 0.0 || x == 1.0 {
                return (r, Some(Ordering::Equal));
            }
            if x < RESIDUAL_SAFE_MIN {
                return (r, None);
            }
            // sqrt(x) - r has the sign of x - r^2
            (r, Some(sign((-r).mul_add(r, x))))
        };
        let lo = lower(root(self.lo)).max(0.0);
        Interval::checked(lo, upper(root(self.hi)))
    }

    /// Nonnegative integer power. Even powers go through [`sqr`](Self::sqr),
    /// odd powers use monotonicity.
    pub fn powi(&self, k: u32) -> Result<Interval> {
        match k {
            0 => Interval::point(1.0),
            1 => Ok(*self),
            _ if k.is_multiple_of(2) => self.powi(k / 2)?.sqr(),
            _ => {
                if self.is_degenerate() {
                    return self.mul(&self.powi(k - 1)?);
                }
                let lo = Interval::point(self.lo)?.powi(k)?;
                let hi = Interval::point(self.hi)?.powi(k)?;
                Interval::checked(lo.lo, hi.hi)
            }
        }
    }

    pub fn exp(&self) -> Result<Interval> {
        let lo = if self.lo == 0.0 {
            1.0
        } else {
            down_n(self.lo.exp(), LIBM_ULPS).max(0.0)
        };
        let hi = if self.hi == 0.0 {
            1.0
        } else {
            up_n(self.hi.exp(), LIBM_ULPS)
        };
        Interval::checked(lo, hi)
    }

    pub fn ln(&self) -> Result<Interval> {
        if self.lo <= 0.0 {
            return Err(IntervalError::DomainViolation {
                function: "ln",
                argument: *self,
            });
        }
        let lo = if self.lo == 1.0 {
            0.0
        } else {
            down_n(self.lo.ln(), LIBM_ULPS)
        };
        let hi = if self.hi == 1.0 {
            0.0
        } else {
            up_n(self.hi.ln(), LIBM_ULPS)
        };
        Interval::checked(lo, hi)
    }

    pub fn arctan(&self) -> Result<Interval> {
        let half_pi_hi = up(Interval::PI.hi * 0.5);
        let lo = if self.lo == 0.0 {
            0.0
        } else {
            down_n(self.lo.atan(), LIBM_ULPS).max(-half_pi_hi)
        };
        let hi = if self.hi == 0.0 {
            0.0
        } else {
            up_n(self.hi.atan(), LIBM_ULPS).min(half_pi_hi)
        };
        Interval::checked(lo, hi)
    }

    pub fn sin(&self) -> Result<Interval> {
        self.trig(Trig::Sin)
    }

    pub fn cos(&self) -> Result<Interval> {
        self.trig(Trig::Cos)
    }

    /// Range of sin or cos: endpoint values plus every extremum whose
    /// (enclosed) location might fall inside the argument.
    fn trig(&self, kind: Trig) -> Result<Interval> {
        const FULL: Interval = Interval { lo: -1.0, hi: 1.0 };
        const HUGE: f64 = 1.0e15;
        let two_pi_lo = 2.0 * Interval::PI.lo;
        if self.lo.abs() > HUGE || self.hi.abs() > HUGE || self.width() >= two_pi_lo {
            return Ok(FULL);
        }
        let (eval, offset): (fn(f64) -> f64, f64) = match kind {
            Trig::Sin => (f64::sin, 0.5),
            Trig::Cos => (f64::cos, 0.0),
        };
        let enclose = |x: f64| -> Interval {
            if x == 0.0 {
                let v = match kind {
                    Trig::Sin => 0.0,
                    Trig::Cos => 1.0,
                };
                return Interval { lo: v, hi: v };
            }
            let v = eval(x);
            Interval {
                lo: down_n(v, LIBM_ULPS).max(-1.0),
                hi: up_n(v, LIBM_ULPS).min(1.0),
            }
        };
        let mut range = enclose(self.lo).hull(&enclose(self.hi));
        // Extrema of sin sit at (k + 1/2)π with value (-1)^k, of cos at kπ.
        let pi = std::f64::consts::PI;
        let k_min = (self.lo / pi - offset).floor() as i64 - 1;
        let k_max = (self.hi / pi - offset).ceil() as i64 + 1;
        for k in k_min..=k_max {
            let location = Interval::point(k as f64 + offset)?.mul(&Interval::PI)?;
            if location.intersects(self) {
                let v = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                range = range.hull(&Interval { lo: v, hi: v });
            }
        }
        Ok(Interval {
            lo: range.lo.max(-1.0),
            hi: range.hi.min(1.0),
        })
    }
}

#[derive(Clone, Copy)]
enum Trig {
    Sin,
    Cos,
}

/// Splits a decimal literal into an integer digit string and a power of ten.
fn parse_decimal(text: &str) -> Option<(BigUint, i64)> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i64>().ok()?),
        None => (text, 0),
    };
    let mantissa = mantissa.strip_prefix('+').unwrap_or(mantissa);
    if mantissa.starts_with('-') {
        return None;
    }
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all: String = format!("{int_part}{frac_part}");
    if !all.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits = if all.is_empty() {
        BigUint::from(0u32)
    } else {
        all.parse::<BigUint>().ok()?
    };
    Some((digits, exponent - frac_part.len() as i64))
}

/// Exact test `digits * 10^exp10 == v` for a finite nonnegative double.
fn decimal_equals(digits: &BigUint, exp10: i64, v: f64) -> bool {
    if v == 0.0 {
        return *digits == BigUint::from(0u32);
    }
    if exp10.abs() > 1000 {
        return false;
    }
    let bits = v.to_bits();
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp2) = if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp_bits - 1075)
    };
    let ten = BigUint::from(10u32);
    let two = BigUint::from(2u32);
    let mut lhs = digits.clone();
    let mut rhs = BigUint::from(mant);
    if exp10 >= 0 {
        lhs *= ten.pow(exp10 as u32);
    } else {
        rhs *= ten.pow((-exp10) as u32);
    }
    if exp2 >= 0 {
        rhs *= two.pow(exp2 as u32);
    } else {
        lhs *= two.pow((-exp2) as u32);
    }
    lhs == rhs
}

/// Ordered list of intervals, one per coordinate axis.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalBox {
    components: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(components: Vec<Interval>) -> Result<Self> {
        if components.is_empty() {
            return Err(IntervalError::EmptyBox);
        }
        Ok(IntervalBox { components })
    }

    /// Box from `(lo, hi)` pairs.
    pub fn from_bounds(bounds: &[(f64, f64)]) -> Result<Self> {
        let components = bounds
            .iter()
            .map(|&(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>>>()?;
        IntervalBox::new(components)
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn get(&self, axis: usize) -> Interval {
        self.components[axis]
    }

    pub fn midpoint(&self) -> Vec<f64> {
        self.components.iter().map(Interval::midpt).collect()
    }

    pub fn contains_point(&self, x: &[f64]) -> bool {
        x.len() == self.dim() && self.components.iter().zip(x).all(|(c, &v)| c.contains(v))
    }

    pub fn is_subset_of(&self, other: &IntervalBox) -> bool {
        self.dim() == other.dim()
            && self
                .components
                .iter()
                .zip(&other.components)
                .all(|(a, b)| a.is_subset_of(b))
    }
}

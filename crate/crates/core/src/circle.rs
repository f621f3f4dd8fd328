//! Unit-modulus scalars stored by angle.

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

/// A point of the circle group. Exact values are rational numbers of turns
/// reduced to `[0, 1)`; other values carry a floating angle in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CircleValue {
    Turns(Ratio<i64>),
    Radians(f64),
}

impl Default for CircleValue {
    fn default() -> Self {
        Self::one()
    }
}

fn reduce(r: Ratio<i64>) -> Ratio<i64> {
    r - r.floor()
}

impl CircleValue {
    pub fn one() -> Self {
        Self::Turns(Ratio::zero())
    }

    /// `exp(2πi · num/den)`.
    pub fn turns(num: i64, den: i64) -> Self {
        Self::Turns(reduce(Ratio::new(num, den)))
    }

    pub fn from_ratio(r: Ratio<i64>) -> Self {
        Self::Turns(reduce(r))
    }

    pub fn radians(angle: f64) -> Self {
        Self::Radians(angle)
    }

    /// The `m`-th root of unity `exp(2πi k/m)`.
    pub fn root_of_unity(k: i64, m: i64) -> Self {
        Self::turns(k, m)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Turns(_))
    }

    /// Exactly one: zero turns, or a floating angle equal to zero.
    pub fn is_one(&self) -> bool {
        match *self {
            Self::Turns(r) => r.is_zero(),
            Self::Radians(a) => a == 0.0,
        }
    }

    /// Angle in radians; exact values map into `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        match *self {
            Self::Turns(r) => TAU * (*r.numer() as f64) / (*r.denom() as f64),
            Self::Radians(a) => a,
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Self) -> Self {
        match (self, other) {
            (Self::Turns(a), Self::Turns(b)) => Self::Turns(reduce(a + b)),
            (a, b) => Self::Radians(a.angle() + b.angle()),
        }
    }

    pub fn conj(self) -> Self {
        match self {
            Self::Turns(r) => Self::Turns(reduce(-r)),
            Self::Radians(a) => Self::Radians(-a),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(self, other: Self) -> Self {
        self.mul(other.conj())
    }

    /// Scales the stored angle; for exact values the `[0, 1)` representative is scaled.
    pub fn scale(self, t: Ratio<i64>) -> Self {
        match self {
            Self::Turns(r) => Self::Turns(reduce(r * t)),
            Self::Radians(a) => Self::Radians(a * (*t.numer() as f64) / (*t.denom() as f64)),
        }
    }

    /// Floating version of [`CircleValue::scale`].
    pub fn scale_f64(self, t: f64) -> Self {
        Self::Radians(self.angle() * t)
    }

    pub fn to_complex(&self) -> Complex64 {
        if let Self::Turns(r) = *self {
            // quarter turns are returned exactly
            if (*r.denom()) <= 4 && 4 % *r.denom() == 0 {
                return match *r.numer() * (4 / *r.denom()) {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
            }
        }
        Complex64::from_polar(1.0, self.angle())
    }

    /// `|self - other|` as complex numbers; zero for equal exact values.
    pub fn deviation(&self, other: &Self) -> f64 {
        match (self, other) {
            (Self::Turns(a), Self::Turns(b)) if a == b => 0.0,
            _ => (self.to_complex() - other.to_complex()).norm(),
        }
    }

    /// `k` in `0..m` with `self = exp(2πi k/m)`, if `self` is an exact `m`-th root of unity.
    pub fn exponent_mod(&self, m: i64) -> Option<i64> {
        match *self {
            Self::Turns(r) => {
                let k = r * Ratio::from_integer(m);
                k.is_integer().then(|| k.to_integer().mod_floor(&m))
            }
            Self::Radians(_) => None,
        }
    }

    /// Exact turns, if any.
    pub fn as_turns(&self) -> Option<Ratio<i64>> {
        match *self {
            Self::Turns(r) => Some(r),
            Self::Radians(_) => None,
        }
    }
}

impl fmt::Display for CircleValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Turns(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Self::Turns(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Self::Radians(a) => write!(f, "{a} rad"),
        }
    }
}

/// Parses a rational `p/q` or integer `p`.
pub fn parse_ratio(s: &str) -> Option<Ratio<i64>> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.trim().parse::<i64>().ok()?, q.trim().parse::<i64>().ok()?);
            (q != 0).then(|| Ratio::new(p, q))
        }
        None => s.parse::<i64>().ok().map(Ratio::from_integer),
    }
}

impl FromStr for CircleValue {
    type Err = String;

    /// Accepts `p/q`, `p` or `p/q turns` as turns and `x rad` as an angle.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if let Some(x) = t.strip_suffix("rad") {
            return x.trim().parse::<f64>().map(Self::radians).map_err(|_| format!("bad angle {s:?}"));
        }
        let t = t.strip_suffix("turns").unwrap_or(t).trim();
        parse_ratio(t).map(Self::from_ratio).ok_or_else(|| format!("expected turns as p/q, got {s:?}"))
    }
}

/// Exact rational value of a float, when a small-denominator rational round-trips to it.
pub fn rationalize(t: f64) -> Option<Ratio<i64>> {
    let r = Ratio::<i64>::approximate_float(t)?;
    ((*r.numer() as f64) / (*r.denom() as f64) == t).then_some(r)
}

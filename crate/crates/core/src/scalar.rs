//! Scalar abstractions.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_rational::Ratio;
use std::ops::Neg;

use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive};

/// Exact rational number used by the combinatorial paths.
pub type Rational = Ratio<i128>;

/// Floating-point scalar for geometry and quadrature.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` constant.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ordered field: the arithmetic needed by polygon clipping and face
/// functionals. Implemented by `f32`, `f64` and [`Rational`].
pub trait Field: Num + Neg<Output = Self> + PartialOrd + Copy + Debug + ToPrimitive {}

impl<T: Num + Neg<Output = T> + PartialOrd + Copy + Debug + ToPrimitive> Field for T {}

/// `1 + 1` in any field.
#[inline]
pub fn two<S: Field>() -> S {
    S::one() + S::one()
}

/// Exact rational from an integer numerator and denominator.
pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(num, den)
}

/// Exact conversion of a finite `f64` that is an integer.
pub fn integral_rational(x: f64) -> Option<Rational> {
    if x.is_finite() && x.fract() == 0.0 && x.abs() < 1e30 {
        Some(Rational::from_integer(x as i128))
    } else {
        None
    }
}

/// Formats a rational as `p/q` (or `p` when integral).
pub fn rational_string(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().ok()?;
            let q: i128 = q.trim().parse().ok()?;
            (q != 0).then(|| Rational::new(p, q))
        }
        None => s.parse::<i128>().ok().map(Rational::from_integer),
    }
}

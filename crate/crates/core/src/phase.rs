//! Unit complex numbers stored as angles measured in full turns.
//!
//! An exact phase keeps a reduced rational angle `q` in `[0, 1)` and represents
//! `exp(2πi q)`. Products of exact phases stay exact; only materialization to a
//! complex double introduces rounding.

use std::fmt;
use std::ops::{Mul, MulAssign};

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    Exact(Rational64),
    Approx(f64),
}

impl Phase {
    pub const ONE: Phase = Phase::Exact(Rational64::new_raw(0, 1));

    pub fn from_turns(q: Rational64) -> Self {
        Phase::Exact(reduce_turns(q))
    }

    pub fn from_turns_f64(q: f64) -> Self {
        Phase::Approx(q.rem_euclid(1.0))
    }

    /// Parses `"p/q"` or an integer string as an exact angle in turns.
    pub fn parse(s: &str) -> Result<Self> {
        parse_rational(s).map(Phase::from_turns)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Phase::Exact(_))
    }

    pub fn is_one(&self) -> bool {
        match self {
            Phase::Exact(q) => q.is_zero(),
            Phase::Approx(q) => *q == 0.0,
        }
    }

    pub fn turns(&self) -> Option<Rational64> {
        match self {
            Phase::Exact(q) => Some(*q),
            Phase::Approx(_) => None,
        }
    }

    pub fn turns_f64(&self) -> f64 {
        match self {
            Phase::Exact(q) => q.to_f64().unwrap_or(0.0),
            Phase::Approx(q) => *q,
        }
    }

    pub fn conj(&self) -> Self {
        match self {
            Phase::Exact(q) => Phase::from_turns(-*q),
            Phase::Approx(q) => Phase::from_turns_f64(-*q),
        }
    }

    pub fn inv(&self) -> Self {
        self.conj()
    }

    pub fn pow(&self, n: i64) -> Self {
        match self {
            Phase::Exact(q) => Phase::from_turns(*q * Rational64::from_integer(n)),
            Phase::Approx(q) => Phase::from_turns_f64(*q * n as f64),
        }
    }

    /// Materializes `exp(2πi q)`. Angles that are multiples of 1/4 turn map to
    /// the exact values `±1`, `±i`.
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Phase::Exact(q) => {
                let d = *q.denom();
                if d == 1 {
                    return Complex64::new(1.0, 0.0);
                }
                if d == 2 {
                    return Complex64::new(-1.0, 0.0);
                }
                if d == 4 {
                    return if *q.numer() == 1 {
                        Complex64::new(0.0, 1.0)
                    } else {
                        Complex64::new(0.0, -1.0)
                    };
                }
                angle_to_complex(q.to_f64().unwrap_or(0.0))
            }
            Phase::Approx(q) => angle_to_complex(*q),
        }
    }

    /// Distance `|a - b|` between the materialized values. Zero for equal exact phases.
    pub fn distance(&self, other: &Phase) -> f64 {
        if let (Phase::Exact(a), Phase::Exact(b)) = (self, other) {
            if a == b {
                return 0.0;
            }
        }
        (self.to_complex() - other.to_complex()).norm()
    }
}

fn angle_to_complex(turns: f64) -> Complex64 {
    let (s, c) = (std::f64::consts::TAU * turns).sin_cos();
    Complex64::new(c, s)
}

/// Reduces a rational angle into `[0, 1)`.
pub fn reduce_turns(q: Rational64) -> Rational64 {
    let d = *q.denom();
    let n = q.numer().rem_euclid(d);
    Rational64::new(n, d)
}

pub fn parse_rational(s: &str) -> Result<Rational64> {
    let t = s.trim();
    let parsed = match t.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| Error::InvalidRational(s.into()))?;
            let d: i64 = d.trim().parse().map_err(|_| Error::InvalidRational(s.into()))?;
            if d == 0 {
                return Err(Error::InvalidRational(s.into()));
            }
            Rational64::new(n, d)
        }
        None => Rational64::from_integer(t.parse().map_err(|_| Error::InvalidRational(s.into()))?),
    };
    Ok(parsed)
}

pub fn format_rational(q: &Rational64) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// An unreduced angle in turns. Multiplier families `σˢ` scale the lift, not
/// the reduced phase, so the lift is kept until materialization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Angle {
    Exact(Rational64),
    Approx(f64),
}

impl Angle {
    pub const ZERO: Angle = Angle::Exact(Rational64::new_raw(0, 1));

    pub fn from_integer(n: i64) -> Self {
        Angle::Exact(Rational64::from_integer(n))
    }

    pub fn as_f64(&self) -> f64 {
        match self {
            Angle::Exact(q) => q.to_f64().unwrap_or(0.0),
            Angle::Approx(x) => *x,
        }
    }

    pub fn exact(&self) -> Option<Rational64> {
        match self {
            Angle::Exact(q) => Some(*q),
            Angle::Approx(_) => None,
        }
    }

    pub fn scale(&self, s: Rational64) -> Self {
        match self {
            Angle::Exact(q) => Angle::Exact(*q * s),
            Angle::Approx(x) => Angle::Approx(x * s.to_f64().unwrap_or(0.0)),
        }
    }

    pub fn to_phase(&self) -> Phase {
        match self {
            Angle::Exact(q) => Phase::from_turns(*q),
            Angle::Approx(x) => Phase::from_turns_f64(*x),
        }
    }
}

impl std::ops::Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        match (self, rhs) {
            (Angle::Exact(a), Angle::Exact(b)) => Angle::Exact(a + b),
            (a, b) => Angle::Approx(a.as_f64() + b.as_f64()),
        }
    }
}

impl std::ops::Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        self + (-rhs)
    }
}

impl std::ops::Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        match self {
            Angle::Exact(a) => Angle::Exact(-a),
            Angle::Approx(x) => Angle::Approx(-x),
        }
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ONE
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        match (self, rhs) {
            (Phase::Exact(a), Phase::Exact(b)) => Phase::from_turns(a + b),
            (a, b) => Phase::from_turns_f64(a.turns_f64() + b.turns_f64()),
        }
    }
}

impl MulAssign for Phase {
    fn mul_assign(&mut self, rhs: Phase) {
        *self = *self * rhs;
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Phase::Exact(q) => write!(f, "exp(2πi·{})", format_rational(q)),
            Phase::Approx(q) => write!(f, "exp(2πi·{q})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_products_reduce_mod_one() {
        let a = Phase::from_turns(Rational64::new(2, 3));
        let b = Phase::from_turns(Rational64::new(1, 2));
        assert_eq!(a * b, Phase::from_turns(Rational64::new(1, 6)));
        assert_eq!(a * a.conj(), Phase::ONE);
        assert!(Phase::from_turns(Rational64::from_integer(-3)).is_one());
    }

    #[test]
    fn quarter_turns_materialize_exactly() {
        assert_eq!(Phase::parse("1/4").unwrap().to_complex(), Complex64::new(0.0, 1.0));
        assert_eq!(Phase::parse("3/4").unwrap().to_complex(), Complex64::new(0.0, -1.0));
        assert_eq!(Phase::parse("1/2").unwrap().to_complex(), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn materialized_values_have_unit_modulus() {
        for d in 1..60 {
            for n in 0..d {
                let z = Phase::from_turns(Rational64::new(n, d)).to_complex();
                assert!((z.norm() - 1.0).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(parse_rational(" -2/6 ").unwrap(), Rational64::new(-1, 3));
    }
}

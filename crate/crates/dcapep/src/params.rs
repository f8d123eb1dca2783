//! Function-class parameters (strong convexity / smoothness moduli) and the
//! extended-real conventions they obey.
//!
//! A smoothness modulus may be infinite, meaning no smoothness restriction.
//! Infinite values are handled symbolically by explicit case analysis in the
//! formulas that consume them; IEEE infinities never propagate through the
//! bound arithmetic (conventions in use: `b/inf = 0`, `0*inf = 0`, and
//! coefficient-of-infinity cancellation for ratios).

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smoothness modulus: finite Lipschitz constant of the (sub)gradient map,
/// or `Infinite` (any closed proper convex function qualifies).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Smoothness {
    Finite(f64),
    Infinite,
}

impl Smoothness {
    pub fn is_finite(self) -> bool {
        matches!(self, Smoothness::Finite(_))
    }

    pub fn finite_value(self) -> Option<f64> {
        match self {
            Smoothness::Finite(v) => Some(v),
            Smoothness::Infinite => None,
        }
    }

    /// `1/L` under the convention `b/inf = 0`.
    pub fn recip(self) -> f64 {
        match self {
            Smoothness::Finite(v) => 1.0 / v,
            Smoothness::Infinite => 0.0,
        }
    }

    /// `L - t` as an extended real.
    pub fn minus(self, t: f64) -> ExtReal {
        match self {
            Smoothness::Finite(v) => ExtReal::Finite(v - t),
            Smoothness::Infinite => ExtReal::Infinity,
        }
    }

    /// Strict comparison `L > t` (an infinite modulus exceeds any real).
    pub fn gt(self, t: f64) -> bool {
        match self {
            Smoothness::Finite(v) => v > t,
            Smoothness::Infinite => true,
        }
    }

    /// `L1 - t <= L2` with symbolic infinities.
    pub fn minus_le(self, t: f64, other: Smoothness) -> bool {
        match (self, other) {
            (Smoothness::Finite(a), Smoothness::Finite(b)) => a - t <= b,
            (Smoothness::Finite(_), Smoothness::Infinite) => true,
            (Smoothness::Infinite, Smoothness::Finite(_)) => false,
            (Smoothness::Infinite, Smoothness::Infinite) => true,
        }
    }

    /// Reciprocal of a strong-convexity modulus: `1/mu`, infinite when `mu = 0`.
    pub fn from_recip_of(mu: f64) -> Smoothness {
        if mu == 0.0 {
            Smoothness::Infinite
        } else {
            Smoothness::Finite(1.0 / mu)
        }
    }
}

impl fmt::Display for Smoothness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Smoothness::Finite(v) => write!(f, "{v}"),
            Smoothness::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Smoothness {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") || t == "∞" {
            return Ok(Smoothness::Infinite);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::Parse(format!("cannot parse smoothness value {s:?}")))?;
        if v.is_infinite() && v > 0.0 {
            Ok(Smoothness::Infinite)
        } else {
            Ok(Smoothness::Finite(v))
        }
    }
}

impl Serialize for Smoothness {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Smoothness::Finite(v) => serializer.serialize_f64(*v),
            Smoothness::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Smoothness {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = Smoothness;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a number or the string \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Smoothness, E> {
                Ok(if v.is_infinite() {
                    Smoothness::Infinite
                } else {
                    Smoothness::Finite(v)
                })
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Smoothness, E> {
                Ok(Smoothness::Finite(v as f64))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Smoothness, E> {
                Ok(Smoothness::Finite(v as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Smoothness, E> {
                Smoothness::from_str(s).map_err(|e| E::custom(e.to_string()))
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Extended real line, used by the indicator function of the bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtReal {
    NegInfinity,
    Finite(f64),
    Infinity,
}

impl From<f64> for ExtReal {
    fn from(v: f64) -> Self {
        if v.is_infinite() {
            if v > 0.0 {
                ExtReal::Infinity
            } else {
                ExtReal::NegInfinity
            }
        } else {
            ExtReal::Finite(v)
        }
    }
}

/// Parameters of the class of closed proper convex functions that are
/// `mu`-strongly convex and `l`-smooth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionClassParams {
    /// Strong-convexity modulus, `mu >= 0`.
    pub mu: f64,
    /// Smoothness modulus, `l > 0`, possibly infinite; `mu < l` when finite.
    pub l: Smoothness,
}

impl FunctionClassParams {
    pub fn new(mu: f64, l: Smoothness) -> Result<Self> {
        if !mu.is_finite() || mu < 0.0 {
            return Err(Error::InvalidClassParams(format!(
                "mu must be a finite nonnegative real, got {mu}"
            )));
        }
        match l {
            Smoothness::Finite(v) => {
                if !v.is_finite() || v <= 0.0 {
                    return Err(Error::InvalidClassParams(format!(
                        "L must be positive (or infinite), got {v}"
                    )));
                }
                if mu >= v {
                    return Err(Error::InvalidClassParams(format!(
                        "mu < L is required for finite L (division by 1 - mu/L), got mu={mu}, L={v}"
                    )));
                }
            }
            Smoothness::Infinite => {}
        }
        Ok(Self { mu, l })
    }

    /// Class with a finite smoothness modulus.
    pub fn smooth(mu: f64, l: f64) -> Result<Self> {
        Self::new(mu, Smoothness::Finite(l))
    }

    /// Class with no smoothness restriction.
    pub fn nonsmooth(mu: f64) -> Result<Self> {
        Self::new(mu, Smoothness::Infinite)
    }

    /// Toland-dual class of the conjugate function: `F_{mu,L} -> F_{1/L, 1/mu}`.
    pub fn conjugate_dual(&self) -> Result<Self> {
        Self::new(self.l.recip(), Smoothness::from_recip_of(self.mu))
    }
}

impl fmt::Display for FunctionClassParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({}, {})", self.mu, self.l)
    }
}

//! Exact angles, stored as rational multiples of π.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

/// The angle `(num / den) · π`, always in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAngle", into = "RawAngle")]
pub struct AngularValue {
    num: u64,
    den: u64,
}

#[derive(Serialize, Deserialize)]
struct RawAngle {
    num: u64,
    den: u64,
}

impl TryFrom<RawAngle> for AngularValue {
    type Error = String;

    fn try_from(raw: RawAngle) -> Result<Self, Self::Error> {
        if raw.den == 0 {
            return Err("angle denominator must be positive".into());
        }
        let v = AngularValue::new(raw.num, raw.den);
        if v.num != raw.num || v.den != raw.den {
            return Err(format!("angle {}/{} is not in lowest terms", raw.num, raw.den));
        }
        Ok(v)
    }
}

impl From<AngularValue> for RawAngle {
    fn from(v: AngularValue) -> Self {
        RawAngle { num: v.num, den: v.den }
    }
}

impl AngularValue {
    pub const ZERO: AngularValue = AngularValue { num: 0, den: 1 };
    pub const PI: AngularValue = AngularValue { num: 1, den: 1 };
    pub const HALF_PI: AngularValue = AngularValue { num: 1, den: 2 };

    /// Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "angle denominator must be positive");
        let g = num.gcd(&den);
        AngularValue { num: num / g, den: den / g }
    }

    /// `π / k`.
    pub fn pi_over(k: u64) -> Self {
        Self::new(1, k)
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// Saturating subtraction: returns zero when `other > self`.
    pub fn saturating_sub(self, other: Self) -> Self {
        if other >= self {
            Self::ZERO
        } else {
            self - other
        }
    }

    /// Parses `"pi"`, `"pi/6"`, `"3/4 pi"`, `"3pi/4"`, `"0"` and plain fractions
    /// like `"1/2"` (read as multiples of π).
    pub fn parse(text: &str) -> Result<Self, String> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let t = t.to_ascii_lowercase().replace('π', "pi");
        if t.is_empty() {
            return Err("empty angle".into());
        }
        let (num_part, den_part) = match t.split_once('/') {
            Some((a, b)) => (a.to_string(), Some(b.to_string())),
            None => (t.clone(), None),
        };
        let strip_pi = |s: &str| -> (String, bool) {
            if let Some(r) = s.strip_suffix("pi") {
                (r.trim_end_matches('*').to_string(), true)
            } else {
                (s.to_string(), false)
            }
        };
        let (n, _) = strip_pi(&num_part);
        let num: u64 = if n.is_empty() {
            1
        } else {
            n.parse().map_err(|_| format!("bad angle numerator in {text:?}"))?
        };
        let den: u64 = match den_part {
            None => 1,
            Some(d) => {
                let (d, _) = strip_pi(&d);
                d.parse().map_err(|_| format!("bad angle denominator in {text:?}"))?
            }
        };
        if den == 0 {
            return Err("angle denominator must be positive".into());
        }
        Ok(AngularValue::new(num, den))
    }
}

impl Add for AngularValue {
    type Output = AngularValue;

    fn add(self, rhs: Self) -> Self {
        let l = self.den.lcm(&rhs.den);
        AngularValue::new(self.num * (l / self.den) + rhs.num * (l / rhs.den), l)
    }
}

impl Sub for AngularValue {
    type Output = AngularValue;

    /// Panics on negative results.
    fn sub(self, rhs: Self) -> Self {
        let l = self.den.lcm(&rhs.den);
        let a = self.num * (l / self.den);
        let b = rhs.num * (l / rhs.den);
        assert!(a >= b, "negative angle");
        AngularValue::new(a - b, l)
    }
}

impl Mul<u64> for AngularValue {
    type Output = AngularValue;

    fn mul(self, k: u64) -> Self {
        AngularValue::new(self.num * k, self.den)
    }
}

impl Ord for AngularValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for AngularValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for AngularValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.num, self.den) {
            (0, _) => write!(f, "0"),
            (1, 1) => write!(f, "pi"),
            (n, 1) => write!(f, "{n}pi"),
            (n, d) => write!(f, "{n}/{d} pi"),
        }
    }
}

impl fmt::Debug for AngularValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AngularValue({self})")
    }
}

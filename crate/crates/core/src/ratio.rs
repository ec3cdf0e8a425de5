use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Non-negative rational number in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Ratio {
    /// Panics if `den == 0`.
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den != 0, "zero denominator");
        let g = gcd(num, den).max(1);
        Ratio {
            num: num / g,
            den: den / g,
        }
    }

    pub fn integer(v: u64) -> Self {
        Ratio { num: v, den: 1 }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Closest rational with denominator at most `max_den` (Stern-Brocot walk).
    pub fn approximate(x: f64, max_den: u64) -> Option<Self> {
        if !x.is_finite() || x < 0.0 {
            return None;
        }
        let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, 0u64);
        let mut best = Ratio::new(x.round() as u64, 1);
        loop {
            let (mn, md) = (a + c, b + d);
            if md > max_den {
                break;
            }
            let m = mn as f64 / md as f64;
            if (m - x).abs() < (best.to_f64() - x).abs() {
                best = Ratio::new(mn, md);
            }
            if m == x {
                break;
            }
            if m < x {
                a = mn;
                b = md;
            } else {
                c = mn;
                d = md;
            }
        }
        Some(best)
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl std::str::FromStr for Ratio {
    type Err = crate::Error;

    /// Accepts `a/b`, an integer, or a decimal such as `1.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || crate::Error::input(format!("not a ratio: {s:?}"));
        if let Some((a, b)) = s.split_once('/') {
            let num: u64 = a.trim().parse().map_err(|_| bad())?;
            let den: u64 = b.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            return Ok(Ratio::new(num, den));
        }
        if let Ok(v) = s.parse::<u64>() {
            return Ok(Ratio::integer(v));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        Ratio::approximate(x, 1_000_000).ok_or_else(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_orders() {
        assert_eq!(Ratio::new(10, 6), Ratio::new(5, 3));
        assert!(Ratio::new(3, 4) < Ratio::integer(1));
        assert_eq!(Ratio::new(3, 4).to_string(), "3/4");
        assert_eq!(Ratio::new(4, 2).to_string(), "2");
    }

    #[test]
    fn parses_forms() {
        assert_eq!("3/4".parse::<Ratio>().unwrap(), Ratio::new(3, 4));
        assert_eq!("2".parse::<Ratio>().unwrap(), Ratio::integer(2));
        assert_eq!("1.5".parse::<Ratio>().unwrap(), Ratio::new(3, 2));
        assert!("1/0".parse::<Ratio>().is_err());
        assert!("x".parse::<Ratio>().is_err());
    }
}

//! Exact rational arithmetic helpers. All formula and weight bookkeeping
//! stays in `Rational64`; floors and ceilings are applied only where a
//! formula itself applies them.

use num_rational::Rational64;
use num_traits::Zero;

pub type Rat = Rational64;

#[inline]
pub fn rat(p: i64, q: i64) -> Rat {
    Rational64::new(p, q)
}

#[inline]
pub fn rat_int(p: i64) -> Rat {
    Rational64::from_integer(p)
}

/// C(n, 2) as an exact integer rational.
pub fn choose2(n: i64) -> Rat {
    rat_int(n * (n - 1) / 2)
}

/// Binomial coefficient for small arguments.
pub fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

pub fn floor_to_i64(r: Rat) -> i64 {
    r.floor().to_integer()
}

pub fn ceil_to_i64(r: Rat) -> i64 {
    r.ceil().to_integer()
}

/// Renders `p/q`, or just `p` for integers.
pub fn rat_display(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `p/q`, or `-p/q`.
pub fn rat_parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then(|| rat(p, q))
        }
        None => s.parse::<i64>().ok().map(rat_int),
    }
}

/// Serde adapter serializing rationals as `p/q` strings.
pub mod rat_serde {
    use super::{rat_display, rat_parse, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rat_display(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        rat_parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Serde adapter for `Option<Rat>`.
pub mod rat_serde_opt {
    use super::{rat_display, rat_parse, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        match r {
            Some(r) => s.serialize_some(&rat_display(r)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        match s {
            None => Ok(None),
            Some(s) => rat_parse(&s)
                .map(Some)
                .ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))),
        }
    }
}

/// True when `r` is an integer multiple of `unit`.
pub fn is_multiple_of(r: &Rat, unit: &Rat) -> bool {
    if unit.is_zero() {
        return r.is_zero();
    }
    (r / unit).is_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parse() {
        assert_eq!(rat_display(&rat(3, 6)), "1/2");
        assert_eq!(rat_display(&rat_int(-4)), "-4");
        assert_eq!(rat_parse("7/3"), Some(rat(7, 3)));
        assert_eq!(rat_parse("-2"), Some(rat_int(-2)));
        assert_eq!(rat_parse("x"), None);
    }

    #[test]
    fn binom_small() {
        assert_eq!(binom(5, 2), 10);
        assert_eq!(binom(4, 2), 6);
        assert_eq!(binom(3, 5), 0);
    }

    #[test]
    fn multiples() {
        assert!(is_multiple_of(&rat(5, 24), &rat(1, 24)));
        assert!(!is_multiple_of(&rat(1, 5), &rat(1, 24)));
    }
}

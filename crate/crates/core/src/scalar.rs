//! Exact scalar fields.
//!
//! Everything in the linear-algebra half of the crate is generic over
//! [`Scalar`]: a field with an involutive conjugation whose fixed field contains
//! the rationals. Two fields ship with the crate: [`BigRational`] (real,
//! conjugation is the identity) and the Gaussian rationals [`Gq`].
//!
//! Both have a textual form `a/b+c/di`, used by every file format: the real
//! part and the imaginary part are optional, each part is an integer or a
//! fraction, and the imaginary unit is written as a trailing `i`.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};
use thiserror::Error;

/// Gaussian rational: a complex number with rational real and imaginary parts.
pub type Gq = Complex<BigRational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse scalar {text:?}: {reason}")]
pub struct ParseScalarError {
    pub text: String,
    pub reason: String,
}

/// An exact field with conjugation.
pub trait Scalar:
    Num + std::ops::Neg<Output = Self> + Clone + Eq + Hash + Debug + Send + Sync + 'static
{
    /// Involutive field automorphism; the identity on real fields.
    fn conj(&self) -> Self;

    fn from_rational(r: BigRational) -> Self;

    fn re(&self) -> BigRational;

    fn im(&self) -> BigRational;

    /// Parses the `a/b+c/di` syntax. Real fields reject a nonzero imaginary part.
    fn parse_text(text: &str) -> Result<Self, ParseScalarError>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn is_real(&self) -> bool {
        self.im().is_zero()
    }

    /// `|x|^2`, always a nonnegative rational.
    fn norm_sqr(&self) -> BigRational {
        (self.clone() * self.conj()).re()
    }

    fn to_text(&self) -> String {
        format_parts(&self.re(), &self.im())
    }
}

impl Scalar for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_rational(r: BigRational) -> Self {
        r
    }

    fn re(&self) -> BigRational {
        self.clone()
    }

    fn im(&self) -> BigRational {
        BigRational::zero()
    }

    fn parse_text(text: &str) -> Result<Self, ParseScalarError> {
        let (re, im) = parse_parts(text)?;
        if !im.is_zero() {
            return Err(ParseScalarError {
                text: text.to_string(),
                reason: "imaginary part in a real field".into(),
            });
        }
        Ok(re)
    }
}

impl Scalar for Gq {
    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn from_rational(r: BigRational) -> Self {
        Complex::new(r, BigRational::zero())
    }

    fn re(&self) -> BigRational {
        self.re.clone()
    }

    fn im(&self) -> BigRational {
        self.im.clone()
    }

    fn parse_text(text: &str) -> Result<Self, ParseScalarError> {
        let (re, im) = parse_parts(text)?;
        Ok(Complex::new(re, im))
    }
}

/// The imaginary unit of [`Gq`].
pub fn gq_i() -> Gq {
    Complex::new(BigRational::zero(), BigRational::one())
}

pub fn gq(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Gq {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

fn parse_rational(text: &str, whole: &str) -> Result<BigRational, ParseScalarError> {
    let err = |reason: &str| ParseScalarError {
        text: whole.to_string(),
        reason: reason.to_string(),
    };
    if text.is_empty() {
        return Err(err("empty numeral"));
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err("bad numerator"))?;
    let den = BigInt::from_str(den).map_err(|_| err("bad denominator"))?;
    if den.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(num, den))
}

fn parse_parts(text: &str) -> Result<(BigRational, BigRational), ParseScalarError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(ParseScalarError {
            text: text.to_string(),
            reason: "empty".into(),
        });
    }
    let Some(body) = s.strip_suffix('i') else {
        return Ok((parse_rational(&s, text)?, BigRational::zero()));
    };
    // split at the last sign that is not the leading one
    let split = body
        .char_indices()
        .rev()
        .find(|&(k, c)| k > 0 && (c == '+' || c == '-'))
        .map(|(k, _)| k);
    let (re_text, im_text) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_text.is_empty() {
        BigRational::zero()
    } else {
        parse_rational(re_text, text)?
    };
    let im = match im_text {
        "" | "+" => BigRational::one(),
        "-" => -BigRational::one(),
        t => parse_rational(t.strip_prefix('+').unwrap_or(t), text)?,
    };
    Ok((re, im))
}

fn format_parts(re: &BigRational, im: &BigRational) -> String {
    if im.is_zero() {
        return re.to_string();
    }
    let im_abs = im.abs();
    let im_body = if im_abs.is_one() {
        String::new()
    } else {
        im_abs.to_string()
    };
    let sign = if im.is_negative() { "-" } else { "+" };
    if re.is_zero() {
        let sign = if im.is_negative() { "-" } else { "" };
        format!("{sign}{im_body}i")
    } else {
        format!("{re}{sign}{im_body}i")
    }
}

/// Display adapter using the crate's scalar syntax.
pub struct ScalarText<'a, T: Scalar>(pub &'a T);

impl<T: Scalar> Display for ScalarText<'_, T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0.to_text())
    }
}

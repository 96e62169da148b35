//! Exact scalar arithmetic: the rationals or a prime field `F_p` with odd `p`.
//!
//! Every coefficient in the crate is a [`Scalar`]; there is no floating
//! point anywhere. Mixing scalars from different fields is a programming
//! error and panics.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The ground field of a model: `Q` or `F_p` for an odd prime `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

impl FieldSpec {
    /// Checks that a prime field has an odd prime modulus. The skew
    /// conventions require characteristic != 2.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            FieldSpec::Rational => Ok(()),
            FieldSpec::Prime(p) => {
                if *p < 3 {
                    return Err(format!("field modulus {p} must be an odd prime"));
                }
                if *p % 2 == 0 {
                    return Err(format!("field modulus {p} is even; characteristic 2 unsupported"));
                }
                let mut d = 3u32;
                while (d as u64) * (d as u64) <= *p as u64 {
                    if p % d == 0 {
                        return Err(format!("field modulus {p} is not prime (divisible by {d})"));
                    }
                    d += 2;
                }
                Ok(())
            }
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "Q"),
            FieldSpec::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Rat(BigRational),
    Fp { p: u32, val: u32 },
}

impl Scalar {
    pub fn zero(field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Fp { p, val: 0 },
        }
    }

    pub fn one(field: FieldSpec) -> Self {
        match field {
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Fp { p, val: 1 },
        }
    }

    pub fn from_int(field: FieldSpec, n: i64) -> Self {
        match field {
            FieldSpec::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let m = n.rem_euclid(p as i64) as u32;
                Scalar::Fp { p, val: m }
            }
        }
    }

    /// `n/d` in the field. Over `F_p` this is `n * d^{-1}`; `d` must not
    /// reduce to zero mod `p`.
    pub fn from_ratio(field: FieldSpec, n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        match field {
            FieldSpec::Rational => {
                Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
            }
            FieldSpec::Prime(_) => {
                let num = Scalar::from_int(field, n);
                let den = Scalar::from_int(field, d);
                assert!(!den.is_zero(), "denominator {d} vanishes in {field}");
                &num * &den.inv()
            }
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rational,
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { val, .. } => *val == 1,
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Fp { p, val } => Scalar::Fp {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(r) => {
                assert!(!r.is_zero(), "division by zero");
                Scalar::Rat(r.recip())
            }
            Scalar::Fp { p, val } => {
                assert!(*val != 0, "division by zero in F{p}");
                Scalar::Fp { p: *p, val: fp_pow(*val, *p - 2, *p) }
            }
        }
    }

    /// `1/n!`, used by the gauge-transformation series. Fails over `F_p`
    /// when `n!` vanishes mod `p`.
    pub fn inv_factorial(field: FieldSpec, n: u64) -> Result<Scalar, String> {
        let mut acc = Scalar::one(field);
        for k in 1..=n {
            let f = Scalar::from_int(field, k as i64);
            if f.is_zero() {
                return Err(format!("{k}! is not invertible over {field}"));
            }
            acc = &acc * &f;
        }
        Ok(acc.inv())
    }

    fn same_field(&self, other: &Scalar) -> FieldSpec {
        let (a, b) = (self.field(), other.field());
        assert!(a == b, "scalar field mismatch: {a} vs {b}");
        a
    }
}

fn fp_pow(base: u32, mut exp: u32, p: u32) -> u32 {
    let m = p as u64;
    let mut acc = 1u64;
    let mut b = base as u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u32
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                Scalar::Fp { p: *p, val: ((*a as u64 + *b as u64) % *p as u64) as u32 }
            }
            _ => unreachable!(),
        }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &rhs.neg()
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.same_field(rhs);
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { p, val: a }, Scalar::Fp { val: b, .. }) => {
                Scalar::Fp { p: *p, val: ((*a as u64 * *b as u64) % *p as u64) as u32 }
            }
            _ => unreachable!(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { val, .. } => write!(f, "{val}"),
        }
    }
}

impl Scalar {
    /// True when the rational is negative (used by renderers to choose
    /// between "+" and "-" separators). `F_p` values are never negative.
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Fp { .. } => false,
        }
    }

    /// Absolute value for rendering; identity over `F_p`.
    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }
}

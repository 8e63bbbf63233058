//! Coefficient kernel: exact rationals (arbitrary precision) or binary64 floats.
//!
//! Every series in this crate carries coefficients from exactly one of the two
//! fields. The two are never mixed silently: public series operations reject
//! mixed inputs with an error, and the arithmetic on `Coefficient` itself
//! treats a mixed pair as a violated invariant.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Which coefficient field a value (or a whole series) lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldTag {
    /// Arbitrary-precision rationals, stored in lowest terms.
    Exact,
    /// IEEE 754 binary64.
    Float,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Exact => write!(f, "exact"),
            FieldTag::Float => write!(f, "float"),
        }
    }
}

/// A number from one of the two supported coefficient fields.
///
/// `BigRational` keeps itself in lowest terms with a positive denominator,
/// which is exactly the normal form the exact field requires.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Exact(BigRational),
    Float(f64),
}

impl Coefficient {
    pub fn tag(&self) -> FieldTag {
        match self {
            Coefficient::Exact(_) => FieldTag::Exact,
            Coefficient::Float(_) => FieldTag::Float,
        }
    }

    pub fn zero(tag: FieldTag) -> Self {
        match tag {
            FieldTag::Exact => Coefficient::Exact(BigRational::zero()),
            FieldTag::Float => Coefficient::Float(0.0),
        }
    }

    pub fn one(tag: FieldTag) -> Self {
        match tag {
            FieldTag::Exact => Coefficient::Exact(BigRational::one()),
            FieldTag::Float => Coefficient::Float(1.0),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Coefficient::Exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// Exact `p/q`. Panics if `q == 0`.
    pub fn from_ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Coefficient::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_big(r: BigRational) -> Self {
        Coefficient::Exact(r)
    }

    pub fn from_f64(x: f64) -> Self {
        Coefficient::Float(x)
    }

    /// Integer `n` in the requested field.
    pub fn int_in(tag: FieldTag, n: i64) -> Self {
        match tag {
            FieldTag::Exact => Self::from_int(n),
            FieldTag::Float => Coefficient::Float(n as f64),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(r) => r.is_zero(),
            Coefficient::Float(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Exact(r) => r.is_one(),
            Coefficient::Float(x) => *x == 1.0,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Coefficient::Exact(r) => r.is_positive(),
            Coefficient::Float(x) => *x > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Coefficient::Exact(r) => r.is_negative(),
            Coefficient::Float(x) => *x < 0.0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coefficient::Float(x) => *x,
        }
    }

    /// The same value moved into the float field.
    pub fn to_float(&self) -> Coefficient {
        Coefficient::Float(self.to_f64())
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Coefficient::Exact(r) => Some(r),
            Coefficient::Float(_) => None,
        }
    }

    pub fn abs(&self) -> Coefficient {
        match self {
            Coefficient::Exact(r) => Coefficient::Exact(r.abs()),
            Coefficient::Float(x) => Coefficient::Float(x.abs()),
        }
    }

    /// Division. Panics on mixed tags or an exact zero divisor; callers divide
    /// only by values that are nonzero by construction.
    pub fn div(&self, rhs: &Coefficient) -> Coefficient {
        match (self, rhs) {
            (Coefficient::Exact(a), Coefficient::Exact(b)) => {
                assert!(!b.is_zero(), "exact division by zero");
                Coefficient::Exact(a / b)
            }
            (Coefficient::Float(a), Coefficient::Float(b)) => Coefficient::Float(a / b),
            _ => panic!("mixed exact/float coefficient arithmetic"),
        }
    }

    /// Multiply by the integer `k` (stays in the same field).
    pub fn scale_int(&self, k: i64) -> Coefficient {
        self * &Coefficient::int_in(self.tag(), k)
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Exact(r) => write!(f, "{}", r),
            Coefficient::Float(x) => write!(f, "{:?}", x),
        }
    }
}

macro_rules! coeff_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Coefficient {
            type Output = Coefficient;
            fn $method(self, rhs: &Coefficient) -> Coefficient {
                match (self, rhs) {
                    (Coefficient::Exact(a), Coefficient::Exact(b)) => Coefficient::Exact(a $op b),
                    (Coefficient::Float(a), Coefficient::Float(b)) => Coefficient::Float(a $op b),
                    _ => panic!("mixed exact/float coefficient arithmetic"),
                }
            }
        }
    };
}

coeff_binop!(Add, add, +);
coeff_binop!(Sub, sub, -);
coeff_binop!(Mul, mul, *);

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Exact(r) => Coefficient::Exact(-r),
            Coefficient::Float(x) => Coefficient::Float(-x),
        }
    }
}

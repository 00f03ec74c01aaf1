//! Exact half-integer quantum numbers.
//!
//! Spin and magnetic quantum numbers are stored as doubled integers so that
//! all index arithmetic and map keys stay exact; no floating-point value is
//! ever used to label a state.

use std::fmt;
use std::iter::Sum;
use std::ops::{ Add, AddAssign, Neg, Sub, SubAssign };
use num_complex::Complex64 as C64;

/// A half-integer `doubled / 2`, stored exactly.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    doubled: i32,
}

impl HalfInt {
    pub const ZERO: Self = Self { doubled: 0 };

    /// Construct from a doubled value: `HalfInt::new(3)` is 3/2.
    pub const fn new(doubled: i32) -> Self {
        Self { doubled }
    }

    /// Construct from a whole integer.
    pub const fn whole(n: i32) -> Self {
        Self { doubled: 2 * n }
    }

    pub const fn doubled(self) -> i32 {
        self.doubled
    }

    /// Value as a float; for indexing always use [`Self::doubled`].
    pub fn to_f64(self) -> f64 {
        f64::from(self.doubled) / 2.0
    }

    pub const fn is_whole(self) -> bool {
        self.doubled % 2 == 0
    }

    /// Exact (-1)^x as a complex phase: i^doubled, one of {1, i, -1, -i}.
    ///
    /// Exactness matters: evaluating exp(iπx) by trigonometry would leak
    /// rounding into quantities that must cancel to machine precision.
    pub fn phase(self) -> C64 {
        match self.doubled.rem_euclid(4) {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    pub fn abs(self) -> Self {
        Self { doubled: self.doubled.abs() }
    }

    /// `|j1 - j2| <= j <= j1 + j2` with matching integrality.
    pub fn triangle(j1: Self, j2: Self, j: Self) -> bool {
        let (a, b, c) = (j1.doubled, j2.doubled, j.doubled);
        c >= (a - b).abs() && c <= a + b && (a + b + c) % 2 == 0
    }

    /// Magnetic quantum numbers -j..=j in ascending order.
    pub fn projections(self) -> impl DoubleEndedIterator<Item = HalfInt> {
        let two_j = self.doubled;
        (0..=two_j.max(0)).map(move |k| HalfInt::new(-two_j + 2 * k))
    }

    /// Multiplicity 2j + 1 of a spin-j multiplet.
    pub fn multiplicity(self) -> usize {
        (self.doubled + 1).max(0) as usize
    }
}

impl Add for HalfInt {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { doubled: self.doubled + rhs.doubled }
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: Self) {
        self.doubled += rhs.doubled;
    }
}

impl Sub for HalfInt {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { doubled: self.doubled - rhs.doubled }
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: Self) {
        self.doubled -= rhs.doubled;
    }
}

impl Neg for HalfInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self { doubled: -self.doubled }
    }
}

impl Sum for HalfInt {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

impl From<i32> for HalfInt {
    fn from(n: i32) -> Self {
        Self::whole(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_whole() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

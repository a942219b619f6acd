//! Scalar weights and the `+INF` sentinel.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::Add;
use std::str::FromStr;

use num_traits::{PrimInt, Signed};
use serde::{Serialize, Serializer};

/// Signed integer type usable as an arc weight.
///
/// Every algorithm in this crate compares weights exactly, so only integer
/// scalars qualify. `i32`, `i64` and `i128` are covered by the blanket impl.
pub trait Weight:
    PrimInt + Signed + FromStr + Hash + fmt::Debug + fmt::Display + Serialize + Send + Sync + 'static
{
}

impl<T> Weight for T where
    T: PrimInt
        + Signed
        + FromStr
        + Hash
        + fmt::Debug
        + fmt::Display
        + Serialize
        + Send
        + Sync
        + 'static
{
}

/// An arc weight or the `+INF` sentinel used for missing arcs.
///
/// `Inf` orders above every finite value and absorbs addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cost<W> {
    Finite(W),
    Inf,
}

impl<W: Weight> Cost<W> {
    pub fn zero() -> Self {
        Cost::Finite(W::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn finite(self) -> Option<W> {
        match self {
            Cost::Finite(w) => Some(w),
            Cost::Inf => None,
        }
    }

    /// Subtraction of a finite value; `Inf` stays `Inf`.
    pub fn minus(self, w: W) -> Self {
        match self {
            Cost::Finite(v) => Cost::Finite(v - w),
            Cost::Inf => Cost::Inf,
        }
    }

    /// Addition of a finite value; `Inf` stays `Inf`.
    pub fn plus(self, w: W) -> Self {
        match self {
            Cost::Finite(v) => Cost::Finite(v + w),
            Cost::Inf => Cost::Inf,
        }
    }

    /// `self < bound` for a finite bound.
    pub fn below(self, bound: W) -> bool {
        matches!(self, Cost::Finite(v) if v < bound)
    }

    /// Sum of an iterator of costs, `Inf` as soon as any term is `Inf`.
    pub fn total<I: IntoIterator<Item = Cost<W>>>(iter: I) -> Self {
        iter.into_iter().fold(Cost::zero(), |acc, c| acc + c)
    }
}

impl<W: Weight> From<W> for Cost<W> {
    fn from(w: W) -> Self {
        Cost::Finite(w)
    }
}

impl<W: Weight> Add for Cost<W> {
    type Output = Cost<W>;

    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => match a.checked_add(&b) {
                Some(s) => Cost::Finite(s),
                None if b > W::zero() => Cost::Inf,
                None => Cost::Finite(W::min_value()),
            },
            _ => Cost::Inf,
        }
    }
}

impl<W: Weight> PartialOrd for Cost<W> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<W: Weight> Ord for Cost<W> {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Cost::Finite(a), Cost::Finite(b)) => a.cmp(b),
            (Cost::Finite(_), Cost::Inf) => Ordering::Less,
            (Cost::Inf, Cost::Finite(_)) => Ordering::Greater,
            (Cost::Inf, Cost::Inf) => Ordering::Equal,
        }
    }
}

impl<W: Weight> fmt::Display for Cost<W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(w) => write!(f, "{w}"),
            Cost::Inf => f.write_str("inf"),
        }
    }
}

impl<W: Weight> FromStr for Cost<W> {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        if s.eq_ignore_ascii_case("inf") {
            Ok(Cost::Inf)
        } else {
            s.parse::<W>().map(Cost::Finite).map_err(|_| ())
        }
    }
}

impl<W: Weight> Serialize for Cost<W> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cost::Finite(w) => w.serialize(s),
            Cost::Inf => s.serialize_str("inf"),
        }
    }
}

/// The rounded natural logarithm used for trial and start counts:
/// `ln 8 = 2.08 -> 2`, `ln 20 = 2.996 -> 3`. Never less than 1.
pub fn log_round(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    ((n as f64).ln().round() as usize).max(1)
}

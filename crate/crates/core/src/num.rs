//! Exact integer arithmetic for spanning-tree counts.
//!
//! Counting is generic over the integer type: fixed-width types
//! ([`TreeCount`](crate::TreeCount)) report overflow, while
//! [`BigTreeCount`](crate::BigTreeCount) never does.

use std::fmt::{Debug, Display};

use num_traits::{CheckedMul, CheckedSub, FromPrimitive, Signed};

/// A signed integer with overflow-checked multiplication and subtraction.
pub trait ExactInt:
    Signed + CheckedMul + CheckedSub + FromPrimitive + Clone + Debug + Display
{
}

impl<T> ExactInt for T where
    T: Signed + CheckedMul + CheckedSub + FromPrimitive + Clone + Debug + Display
{
}

/// Determinant by fraction-free (Bareiss) elimination. Every intermediate
/// division is exact. Returns `None` if an intermediate value overflows `T`.
pub fn bareiss_determinant<T: ExactInt>(mut a: Vec<Vec<T>>) -> Option<T> {
    let n = a.len();
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(pivot) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Some(T::zero());
            };
            a.swap(k, pivot);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = a[i][j].checked_mul(&a[k][k])?;
                let rhs = a[i][k].checked_mul(&a[k][j])?;
                a[i][j] = lhs.checked_sub(&rhs)? / prev.clone();
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let det = if n == 0 {
        T::one()
    } else {
        a[n - 1][n - 1].clone()
    };
    Some(if negate { -det } else { det })
}

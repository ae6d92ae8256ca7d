use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, ToPrimitive, Unsigned};

/// Unsigned integer scalar accepted by the digit and valuation routines.
///
/// Implemented for the primitive unsigned types and for [`crate::Natural`].
pub trait UInt: Integer + Unsigned + Clone + FromPrimitive + ToPrimitive + Debug + Display {}

impl<T> UInt for T where
    T: Integer + Unsigned + Clone + FromPrimitive + ToPrimitive + Debug + Display
{
}

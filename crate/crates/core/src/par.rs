//! Thin shim so the same loops compile with and without rayon. Modules import
//! both `par_iter` and `ParallelIterator` from here.

#[cfg(feature = "parallel")]
macro_rules! par_iter {
    ($e:expr) => {
        rayon::iter::IntoParallelIterator::into_par_iter($e)
    };
}

#[cfg(not(feature = "parallel"))]
macro_rules! par_iter {
    ($e:expr) => {
        IntoIterator::into_iter($e)
    };
}

pub(crate) use par_iter;

#[cfg(feature = "parallel")]
pub(crate) use rayon::iter::ParallelIterator;

#[cfg(not(feature = "parallel"))]
#[allow(dead_code)]
pub(crate) trait ParallelIterator {}

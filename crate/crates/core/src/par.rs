//! Thin data-parallel helpers. With the `parallel` feature (default)
//! these fan out over rayon's global pool; without it they run
//! sequentially with identical results, since every call site uses
//! order-preserving maps over index ranges or slices.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over the slice, preserving order.
pub fn map_slice<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Maps `f` over `0..n`, preserving order.
pub fn map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Maps `f` over `0..n` and concatenates the per-index result vectors
/// in index order.
pub fn flat_map_range<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().flat_map_iter(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).flat_map(f).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maps_preserve_order() {
        let xs: Vec<u64> = (0..100).collect();
        let doubled = map_slice(&xs, |x| x * 2);
        assert_eq!(doubled, (0..100).map(|x| x * 2).collect::<Vec<_>>());
        let squares = map_range(50, |i| (i * i) as u64);
        assert_eq!(squares, (0..50).map(|i| (i * i) as u64).collect::<Vec<_>>());
        let runs = flat_map_range(5, |i| vec![i; i]);
        assert_eq!(runs, vec![1, 2, 2, 3, 3, 3, 4, 4, 4, 4]);
    }
}

//! Running a check over many seeds.
//!
//! With the `parallel` feature (on by default) [`map_seeds`] fans out over
//! rayon's pool; without it, or through [`map_seeds_seq`], seeds run in
//! order on the calling thread. Results are in seed order either way.

use std::ops::Range;

pub fn map_seeds_seq<R, F>(seeds: Range<u64>, f: F) -> Vec<R>
where
    F: Fn(u64) -> R,
{
    seeds.map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_seeds_par<R, F>(seeds: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    use rayon::prelude::*;
    seeds.into_par_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_seeds<R, F>(seeds: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    map_seeds_par(seeds, f)
}

#[cfg(not(feature = "parallel"))]
pub fn map_seeds<R, F>(seeds: Range<u64>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(u64) -> R + Sync + Send,
{
    map_seeds_seq(seeds, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_order_is_kept() {
        let expect: Vec<u64> = (0..100).map(|s| s * s).collect();
        assert_eq!(map_seeds(0..100, |s| s * s), expect);
        assert_eq!(map_seeds_seq(0..100, |s| s * s), expect);
    }
}

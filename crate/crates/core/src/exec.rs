//! Execution policy for data-parallel loops.
//!
//! Every parallel loop in the crate goes through [`Exec::map`], which
//! collects results in index order. Outputs are therefore identical under
//! both policies; only wall-clock time differs. Without the `parallel`
//! feature, [`Exec::Parallel`] runs sequentially.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Evaluates `f(0..n)` and returns the results in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Like [`Exec::map`] but short-circuits on the first error (in index
    /// order for the sequential policy, any order for the parallel one).
    pub fn try_map<T, E, F>(self, n: usize, f: F) -> Result<Vec<T>, E>
    where
        T: Send,
        E: Send,
        F: Fn(usize) -> Result<T, E> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => (0..n).into_par_iter().map(f).collect(),
            _ => (0..n).map(f).collect(),
        }
    }

    /// Calls `f(a_chunk, b_chunk)` on matching `width`-sized chunks of two
    /// equally long slices.
    pub fn zip_chunks_mut<T, F>(self, a: &mut [T], b: &mut [T], width: usize, f: F)
    where
        T: Send,
        F: Fn(&mut [T], &mut [T]) + Sync + Send,
    {
        assert_eq!(a.len(), b.len());
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => a.par_chunks_mut(width).zip(b.par_chunks_mut(width)).for_each(|(x, y)| f(x, y)),
            _ => a.chunks_mut(width).zip(b.chunks_mut(width)).for_each(|(x, y)| f(x, y)),
        }
    }

    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree_and_keep_order() {
        let seq = Exec::Sequential.map(1000, |i| i * i);
        let par = Exec::Parallel.map(1000, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
    }

    #[test]
    fn try_map_reports_error() {
        let r: Result<Vec<usize>, usize> = Exec::Parallel.try_map(100, |i| if i == 57 { Err(i) } else { Ok(i) });
        assert_eq!(r, Err(57));
    }
}

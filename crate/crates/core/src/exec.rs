//! Deterministic partition-and-merge execution.
//!
//! Grid sweeps are split into fixed-size chunks; chunk partial sums are
//! computed (possibly on several worker threads) and merged in chunk order.
//! Chunk boundaries never depend on the worker count, so the reduced value
//! is bitwise-identical for any number of workers.

use num_complex::Complex64;

const CHUNK: usize = 8192;

/// Worker-count handle. `Workers(1)` runs inline on the calling thread.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Workers(usize);

impl Workers {
    pub fn new(n: usize) -> Self {
        Workers(n.max(1))
    }

    pub fn serial() -> Self {
        Workers(1)
    }

    pub fn count(&self) -> usize {
        self.0
    }
}

impl Default for Workers {
    fn default() -> Self {
        Workers(1)
    }
}

/// Sum `term(i)` for `i` in `0..n` with fixed-order chunked reduction.
pub fn sum_indexed<F>(n: usize, workers: Workers, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let n_chunks = n.div_ceil(CHUNK);
    let chunk_sum = |c: usize| -> Complex64 {
        let lo = c * CHUNK;
        let hi = (lo + CHUNK).min(n);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in lo..hi {
            acc += term(i);
        }
        acc
    };

    let mut partials = vec![Complex64::new(0.0, 0.0); n_chunks];
    let w = workers.count().min(n_chunks.max(1));
    if w <= 1 {
        for (c, slot) in partials.iter_mut().enumerate() {
            *slot = chunk_sum(c);
        }
    } else {
        // worker i owns a contiguous run of chunks, so `partials` stays in
        // chunk order without any re-gathering
        std::thread::scope(|scope| {
            let mut rest = partials.as_mut_slice();
            let mut base = 0usize;
            for i in 0..w {
                let take = n_chunks / w + usize::from(i < n_chunks % w);
                let (head, tail) = rest.split_at_mut(take);
                rest = tail;
                let chunk_sum = &chunk_sum;
                scope.spawn(move || {
                    for (j, cell) in head.iter_mut().enumerate() {
                        *cell = chunk_sum(base + j);
                    }
                });
                base += take;
            }
        });
    }

    // reduce in fixed chunk order
    let mut total = Complex64::new(0.0, 0.0);
    for p in partials {
        total += p;
    }
    total
}

/// Compute `f(i)` for `i` in `0..n` into a vector, splitting contiguous
/// index ranges across workers. Each element is computed independently, so
/// the output is identical for any worker count.
pub fn map_indexed<T, F>(n: usize, workers: Workers, f: F) -> Vec<T>
where
    T: Send + Default + Clone,
    F: Fn(usize) -> T + Sync,
{
    let mut out = vec![T::default(); n];
    let w = workers.count().min(n.max(1));
    if w <= 1 {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = f(i);
        }
        return out;
    }
    std::thread::scope(|scope| {
        let mut rest = out.as_mut_slice();
        let mut base = 0usize;
        for i in 0..w {
            let take = n / w + usize::from(i < n % w);
            let (head, tail) = rest.split_at_mut(take);
            rest = tail;
            let f = &f;
            scope.spawn(move || {
                for (j, cell) in head.iter_mut().enumerate() {
                    *cell = f(base + j);
                }
            });
            base += take;
        }
    });
    out
}

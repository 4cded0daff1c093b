//! Helpers for vertex sets stored as a single `u64` word.

/// A set of vertices of a graph with at most 64 vertices; bit `v` is vertex `v`.
pub type VertexSet = u64;

/// Mask with the lowest `n` bits set.
#[inline]
pub const fn low_mask(n: usize) -> VertexSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub const fn bit(v: usize) -> VertexSet {
    1u64 << v
}

/// Iterates over the members of a vertex set in increasing order.
#[derive(Clone, Copy, Debug)]
pub struct Members(VertexSet);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Members {}

#[inline]
pub fn members(set: VertexSet) -> Members {
    Members(set)
}

/// Builds a vertex set from a list of vertices.
pub fn set_of<I: IntoIterator<Item = usize>>(vertices: I) -> VertexSet {
    vertices.into_iter().fold(0, |acc, v| acc | bit(v))
}

/// Iterates over all subsets of `set` (including the empty set and `set` itself).
pub fn subsets(set: VertexSet) -> impl Iterator<Item = VertexSet> {
    let mut next = Some(0u64);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == set {
            None
        } else {
            Some((cur.wrapping_sub(set)) & set)
        };
        Some(cur)
    })
}

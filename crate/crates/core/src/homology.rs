//! Rational Betti numbers via exact boundary-matrix ranks.
//!
//! Ranks are computed over Q with arbitrary-precision fractions; GF(2)
//! elimination is available as a fast cross-check path.

use std::collections::HashMap;

use num::{BigRational, Zero};

/// Groups cliques (already sorted by dimension, then lexicographically) by
/// dimension.
fn by_dimension(cliques: &[Vec<u32>]) -> Vec<Vec<&Vec<u32>>> {
    let mut out: Vec<Vec<&Vec<u32>>> = Vec::new();
    for c in cliques {
        let k = c.len() - 1;
        if out.len() <= k {
            out.resize_with(k + 1, Vec::new);
        }
        out[k].push(c);
    }
    out
}

/// Signed faces of a simplex: dropping position `i` carries sign (-1)^i.
fn faces(simplex: &[u32]) -> impl Iterator<Item = (Vec<u32>, i8)> + '_ {
    (0..simplex.len()).map(move |i| {
        let mut face: Vec<u32> = simplex.to_vec();
        face.remove(i);
        (face, if i % 2 == 0 { 1 } else { -1 })
    })
}

fn rank_rational(rows: usize, cols: usize, entries: &[(usize, usize, i8)]) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); cols]; rows];
    for &(r, c, s) in entries {
        m[r][c] = BigRational::from_integer(s.into());
    }
    let mut rank = 0;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !m[r][col].is_zero());
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        let lead = m[rank][col].clone();
        for r in (rank + 1)..rows {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &lead;
            for c in col..cols {
                let delta = &factor * &m[rank][c];
                m[r][c] = &m[r][c] - delta;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn rank_gf2(rows: usize, cols: usize, entries: &[(usize, usize, i8)]) -> usize {
    if rows == 0 || cols == 0 {
        return 0;
    }
    let words = cols.div_ceil(64);
    let mut m: Vec<Vec<u64>> = vec![vec![0u64; words]; rows];
    for &(r, c, _) in entries {
        m[r][c / 64] ^= 1 << (c % 64);
    }
    let mut rank = 0;
    for col in 0..cols {
        let word = col / 64;
        let bit = 1u64 << (col % 64);
        let pivot = (rank..rows).find(|&r| m[r][word] & bit != 0);
        let Some(pivot) = pivot else { continue };
        m.swap(rank, pivot);
        for r in 0..rows {
            if r != rank && m[r][word] & bit != 0 {
                let (head, tail) = m.split_at_mut(r.max(rank));
                let (src, dst) = if r < rank {
                    (&tail[0], &mut head[r])
                } else {
                    (&head[rank], &mut tail[0])
                };
                for w in 0..words {
                    dst[w] ^= src[w];
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn boundary_entries(
    lower: &[&Vec<u32>],
    upper: &[&Vec<u32>],
) -> Vec<(usize, usize, i8)> {
    let index: HashMap<&[u32], usize> = lower
        .iter()
        .enumerate()
        .map(|(i, c)| (c.as_slice(), i))
        .collect();
    let mut entries = Vec::new();
    for (j, simplex) in upper.iter().enumerate() {
        for (face, sign) in faces(simplex) {
            let i = index[face.as_slice()];
            entries.push((i, j, sign));
        }
    }
    entries
}

fn betti_with(
    cliques: &[Vec<u32>],
    rank: impl Fn(usize, usize, &[(usize, usize, i8)]) -> usize,
) -> Vec<usize> {
    if cliques.is_empty() {
        return Vec::new();
    }
    let grouped = by_dimension(cliques);
    let top = grouped.len();
    let mut ranks = vec![0usize; top + 1];
    for k in 1..top {
        let entries = boundary_entries(&grouped[k - 1], &grouped[k]);
        ranks[k] = rank(grouped[k - 1].len(), grouped[k].len(), &entries);
    }
    (0..top)
        .map(|k| grouped[k].len() - ranks[k] - ranks[k + 1])
        .collect()
}

pub(crate) fn betti_rational(cliques: &[Vec<u32>]) -> Vec<usize> {
    betti_with(cliques, rank_rational)
}

pub(crate) fn betti_gf2(cliques: &[Vec<u32>]) -> Vec<usize> {
    betti_with(cliques, rank_gf2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_small_matrices() {
        // 2x2 identity
        assert_eq!(rank_rational(2, 2, &[(0, 0, 1), (1, 1, 1)]), 2);
        // dependent rows
        assert_eq!(
            rank_rational(2, 2, &[(0, 0, 1), (0, 1, 1), (1, 0, -1), (1, 1, -1)]),
            1
        );
        assert_eq!(rank_rational(0, 0, &[]), 0);
        assert_eq!(rank_gf2(2, 2, &[(0, 0, 1), (1, 1, 1)]), 2);
    }

    #[test]
    fn triangle_is_acyclic() {
        // K3 cliques in enumeration order
        let cliques: Vec<Vec<u32>> = vec![
            vec![0],
            vec![1],
            vec![2],
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 1, 2],
        ];
        assert_eq!(betti_rational(&cliques), vec![1, 0, 0]);
        assert_eq!(betti_gf2(&cliques), vec![1, 0, 0]);
    }

    #[test]
    fn circle_has_one_loop() {
        let cliques: Vec<Vec<u32>> = vec![
            vec![0],
            vec![1],
            vec![2],
            vec![3],
            vec![0, 1],
            vec![0, 3],
            vec![1, 2],
            vec![2, 3],
        ];
        assert_eq!(betti_rational(&cliques), vec![1, 1]);
    }
}

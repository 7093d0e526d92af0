//! Linear algebra over F₂ on bit-packed rows (at most 64 columns).

/// Row-reduces `rows` in place and returns the pivot columns, one per nonzero row kept.
fn echelon(rows: &mut Vec<u64>) -> Vec<u32> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..64 {
        let bit = 1u64 << col;
        let Some(i) = (r..rows.len()).find(|&i| rows[i] & bit != 0) else {
            continue;
        };
        rows.swap(r, i);
        let piv = rows[r];
        for (j, row) in rows.iter_mut().enumerate() {
            if j != r && *row & bit != 0 {
                *row ^= piv;
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[u64]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).len()
}

/// A reduced basis of the span of `rows`.
pub fn basis(rows: &[u64]) -> Vec<u64> {
    let mut m = rows.to_vec();
    echelon(&mut m);
    m
}

pub fn in_span(rows: &[u64], v: u64) -> bool {
    let mut m = rows.to_vec();
    let r = echelon(&mut m).len();
    m.push(v);
    echelon(&mut m).len() == r
}

pub fn same_span(a: &[u64], b: &[u64]) -> bool {
    let r = rank(a);
    r == rank(b) && r == rank(&[a, b].concat())
}

/// Basis of `{x ∈ F₂^ncols : row·x = 0 for all rows}`.
pub fn kernel(rows: &[u64], ncols: usize) -> Vec<u64> {
    assert!(ncols <= 64);
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m);
    let mut out = Vec::new();
    for free in 0..ncols as u32 {
        if pivots.contains(&free) {
            continue;
        }
        let mut x = 1u64 << free;
        for (row, &p) in m.iter().zip(&pivots) {
            if row >> free & 1 == 1 {
                x |= 1 << p;
            }
        }
        out.push(x);
    }
    out
}

/// Rows spanning the orthogonal complement of span(`rows`) in F₂^ncols.
pub fn annihilator(rows: &[u64], ncols: usize) -> Vec<u64> {
    kernel(rows, ncols)
}

pub fn dot(a: u64, b: u64) -> bool {
    (a & b).count_ones() % 2 == 1
}

/// Coordinates of `v` in terms of `rows` (which must be independent), if `v` is in their span.
pub fn solve(rows: &[u64], v: u64) -> Option<u64> {
    let n = rows.len();
    assert!(n <= 64);
    // Augment each row with an identity tag stored in a parallel vector.
    let mut m: Vec<(u64, u64)> = rows.iter().enumerate().map(|(i, &r)| (r, 1u64 << i)).collect();
    let mut target = (v, 0u64);
    let mut r = 0;
    for col in 0..64 {
        let bit = 1u64 << col;
        let Some(i) = (r..m.len()).find(|&i| m[i].0 & bit != 0) else {
            continue;
        };
        m.swap(r, i);
        let piv = m[r];
        for (j, row) in m.iter_mut().enumerate() {
            if j != r && row.0 & bit != 0 {
                row.0 ^= piv.0;
                row.1 ^= piv.1;
            }
        }
        if target.0 & bit != 0 {
            target.0 ^= piv.0;
            target.1 ^= piv.1;
        }
        r += 1;
    }
    (target.0 == 0).then_some(target.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(rank(&[0b011, 0b110, 0b101]), 2);
        assert!(in_span(&[0b011, 0b110], 0b101));
        assert!(!in_span(&[0b011, 0b110], 0b100));
        let k = kernel(&[0b011, 0b110], 3);
        assert_eq!(k, vec![0b111]);
        assert_eq!(solve(&[0b011, 0b110], 0b101), Some(0b11));
    }

    proptest! {
        #[test]
        fn kernel_is_orthogonal(rows in proptest::collection::vec(0u64..1 << 12, 0..10)) {
            let k = kernel(&rows, 12);
            prop_assert_eq!(k.len() + rank(&rows), 12);
            for x in &k {
                for r in &rows {
                    prop_assert!(!dot(*x, *r));
                }
            }
        }

        #[test]
        fn solve_reconstructs(rows in proptest::collection::vec(0u64..1 << 10, 1..8), mask in 0u64..256) {
            let b = basis(&rows);
            let v = b.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).fold(0, |acc, (_, r)| acc ^ r);
            let c = solve(&b, v).unwrap();
            let w = b.iter().enumerate().filter(|(i, _)| c >> i & 1 == 1).fold(0, |acc, (_, r)| acc ^ r);
            prop_assert_eq!(v, w);
        }
    }
}

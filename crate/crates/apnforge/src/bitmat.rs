//! Rank computations over GF(2) on word-packed rows.
//!
//! Rows are u64 (vectors in GF(2)^n, n <= 48) or u128 (pairs, n <= 96).
//! Elimination pivots on the lowest set bit of each row; arithmetic is
//! exact, so there are no tolerance concerns.

/// Rank of a list of u64 rows.
pub fn rank_u64(rows: &[u64]) -> u32 {
    let mut basis: Vec<u64> = Vec::new();
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let pivot = b.trailing_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            rank += 1;
        }
    }
    rank
}

/// Rank of a list of u128 rows.
pub fn rank_u128(rows: &[u128]) -> u32 {
    let mut basis: Vec<u128> = Vec::new();
    let mut rank = 0;
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let pivot = b.trailing_zeros();
            if v >> pivot & 1 == 1 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
            rank += 1;
        }
    }
    rank
}

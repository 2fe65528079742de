//! Dense rank computation mod p for the big full-tensor-space matrices.
//! The default prime 2^31 - 1 gets a Mersenne reduction fast path; other
//! primes < 2^32 go through u128 arithmetic.

pub const M31: u64 = 2_147_483_647;

#[inline]
pub(crate) fn m31_reduce(x: u64) -> u64 {
    // two folds bring any u64 below 2^31 + epsilon, then a conditional subtract
    let x = (x & M31) + (x >> 31);
    let x = (x & M31) + (x >> 31);
    if x >= M31 {
        x - M31
    } else {
        x
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert!(r0 == 1, "{} not invertible mod {}", a, p);
    (((t0 % p as i128) + p as i128) % p as i128) as u64
}

/// Rank of the row-major matrix over F_p. Consumes rows one at a time,
/// reducing each against the pivot rows found so far, so sparse leading
/// segments are skipped cheaply.
pub fn rank_mod_p(rows: impl IntoIterator<Item = Vec<u64>>, cols: usize, p: u64) -> usize {
    assert!(p > 1 && p < (1 << 32));
    let mersenne = p == M31;
    // pivot row stored per column, scaled so the pivot entry is 1
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut pivots: Vec<Vec<u64>> = Vec::new();

    for mut row in rows {
        debug_assert_eq!(row.len(), cols);
        let mut c = 0;
        loop {
            while c < cols && row[c] == 0 {
                c += 1;
            }
            if c == cols {
                break;
            }
            match pivot_of_col[c] {
                Some(idx) => {
                    let f = p - row[c]; // row += f * pivot  ==  row -= row[c] * pivot
                    let piv = &pivots[idx];
                    if mersenne {
                        for k in c..cols {
                            let v = piv[k];
                            if v != 0 {
                                row[k] = m31_reduce(row[k] + f * v);
                            }
                        }
                    } else {
                        for k in c..cols {
                            let v = piv[k];
                            if v != 0 {
                                row[k] = ((row[k] as u128 + f as u128 * v as u128)
                                    % p as u128) as u64;
                            }
                        }
                    }
                }
                None => {
                    let inv = inv_mod(row[c], p);
                    if mersenne {
                        for v in row.iter_mut().skip(c) {
                            if *v != 0 {
                                *v = m31_reduce(*v * inv);
                            }
                        }
                    } else {
                        for v in row.iter_mut().skip(c) {
                            if *v != 0 {
                                *v = ((*v as u128 * inv as u128) % p as u128) as u64;
                            }
                        }
                    }
                    pivot_of_col[c] = Some(pivots.len());
                    pivots.push(row);
                    break;
                }
            }
        }
    }
    pivots.len()
}

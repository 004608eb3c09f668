//! Smith normal form of integer matrices over arbitrary-precision integers.
//!
//! Used for abelianization invariants and integer kernel bases. Matrices are
//! row-major `Vec<Vec<BigInt>>`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone)]
pub struct SmithNormalForm {
    /// Diagonal entries, nonnegative, each dividing the next, zeros trailing.
    pub diagonal: Vec<BigInt>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithNormalForm {
    /// Diagonal entries that are neither 0 nor 1, in divisibility order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn big_matrix(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

fn swap_rows(m: &mut [Vec<BigInt>], i: usize, j: usize) {
    m.swap(i, j);
}

fn swap_cols(m: &mut [Vec<BigInt>], v: Option<&mut Vec<Vec<BigInt>>>, i: usize, j: usize) {
    for row in m.iter_mut() {
        row.swap(i, j);
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    }
}

fn add_col_multiple(
    m: &mut [Vec<BigInt>],
    v: Option<&mut Vec<Vec<BigInt>>>,
    dst: usize,
    src: usize,
    q: &BigInt,
) {
    for row in m.iter_mut() {
        let t = &row[src] * q;
        row[dst] += t;
    }
    if let Some(v) = v {
        for row in v.iter_mut() {
            let t = &row[src] * q;
            row[dst] += t;
        }
    }
}

fn add_row_multiple(m: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    let (a, b) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in a.iter_mut().zip(b.iter()) {
        *x += y * q;
    }
}

/// Core reduction. When `col_ops` is given, every column operation is
/// mirrored into it, so that starting it at the identity yields the right
/// transform `V` with `U·M·V = D`.
fn reduce(m: &mut Vec<Vec<BigInt>>, mut col_ops: Option<&mut Vec<Vec<BigInt>>>) -> SmithNormalForm {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let steps = rows.min(cols);

    for k in 0..steps {
        // pivot: smallest nonzero absolute value in the remaining block
        loop {
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !m[i][j].is_zero()
                        && pivot
                            .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else {
                return finish(m, k, col_ops);
            };
            swap_rows(m, k, pi);
            swap_cols(m, col_ops.as_deref_mut(), k, pj);

            let mut dirty = false;
            for i in k + 1..rows {
                if !m[i][k].is_zero() {
                    let q = -(&m[i][k] / &m[k][k]);
                    add_row_multiple(m, i, k, &q);
                    if !m[i][k].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in k + 1..cols {
                if !m[k][j].is_zero() {
                    let q = -(&m[k][j] / &m[k][k]);
                    add_col_multiple(m, col_ops.as_deref_mut(), j, k, &q);
                    if !m[k][j].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue; // remainders became new, smaller pivot candidates
            }
            // divisibility: fold any non-multiple below-right into column k
            let mut fixed = true;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&m[i][j] % &m[k][k]).is_zero() {
                        add_col_multiple(m, col_ops.as_deref_mut(), k, j, &BigInt::one());
                        fixed = false;
                        break 'scan;
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    finish(m, steps, col_ops)
}

fn finish(
    m: &mut [Vec<BigInt>],
    upto: usize,
    _col_ops: Option<&mut Vec<Vec<BigInt>>>,
) -> SmithNormalForm {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let n = rows.min(cols);
    let mut diagonal = Vec::with_capacity(n);
    for k in 0..n {
        let mut d = if k < upto { m[k][k].clone() } else { BigInt::zero() };
        if d.is_negative() {
            d = -d;
        }
        diagonal.push(d);
    }
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    SmithNormalForm { diagonal, rank }
}

pub fn smith_normal_form(matrix: &[Vec<BigInt>]) -> SmithNormalForm {
    let mut m = matrix.to_vec();
    reduce(&mut m, None)
}

/// Integer basis of the right kernel `{ v : M v = 0 }`.
///
/// With `U M V = D`, the kernel is spanned by the columns of `V` matching
/// zero diagonal entries of `D`.
pub fn kernel_basis(matrix: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let rows = matrix.len();
    let cols = if rows == 0 { 0 } else { matrix[0].len() };
    if cols == 0 {
        return Vec::new();
    }
    if rows == 0 {
        // everything is in the kernel
        return (0..cols)
            .map(|j| {
                (0..cols)
                    .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
    }
    let mut m = matrix.to_vec();
    let mut v: Vec<Vec<BigInt>> = (0..cols)
        .map(|i| {
            (0..cols)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
            .collect()
        })
        .collect();
    let snf = reduce(&mut m, Some(&mut v));
    let mut basis = Vec::new();
    for j in 0..cols {
        let zero_diag = j >= snf.diagonal.len() || snf.diagonal[j].is_zero();
        if zero_diag {
            basis.push(v.iter().map(|row| row[j].clone()).collect());
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_of(rows: &[Vec<i64>]) -> Vec<i64> {
        smith_normal_form(&big_matrix(rows))
            .diagonal
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(snf_of(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(snf_of(&[vec![-2, 0, 0], vec![0, -2, 0]]), vec![2, 2]);
        assert_eq!(snf_of(&[vec![0, 0]]), vec![0]);
        assert_eq!(snf_of(&[vec![1, 1], vec![1, 1]]), vec![1, 0]);
    }

    #[test]
    fn divisibility_chain_holds() {
        let m = big_matrix(&[
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let snf = smith_normal_form(&m);
        let d: Vec<i64> = snf.diagonal.iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert_eq!(d, vec![1, 3, 21, 0]);
        for w in snf.diagonal.windows(2) {
            if !w[0].is_zero() && !w[1].is_zero() {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let m = big_matrix(&[vec![1, 1, -2], vec![2, 2, -4]]);
        let basis = kernel_basis(&m);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for row in &m {
                let dot: BigInt = row.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn kernel_of_injective_map_is_trivial() {
        let m = big_matrix(&[vec![-2, 0], vec![0, -2]]);
        assert!(kernel_basis(&m).is_empty());
    }

    // Independent oracle: invariant factors from determinantal divisors,
    // d_k = gcd of all k-by-k minors, s_k = d_k / d_{k-1}.
    fn minor_gcd_oracle(rows: &[Vec<i64>]) -> Vec<i64> {
        let r = rows.len();
        let c = rows[0].len();
        let n = r.min(c);
        let mut d_prev: i128 = 1;
        let mut out = Vec::new();
        for k in 1..=n {
            let mut g: i128 = 0;
            for ri in combinations(r, k) {
                for ci in combinations(c, k) {
                    let det = minor_det(rows, &ri, &ci);
                    g = gcd_i128(g, det.abs());
                }
            }
            if g == 0 {
                out.push(0);
                continue;
            }
            out.push((g / d_prev) as i64);
            d_prev = g;
        }
        // pad trailing entries after a zero determinantal divisor
        for i in 1..out.len() {
            if out[i - 1] == 0 {
                out[i] = 0;
            }
        }
        out
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                go(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        go(0, n, k, &mut cur, &mut out);
        out
    }

    fn minor_det(rows: &[Vec<i64>], ri: &[usize], ci: &[usize]) -> i128 {
        let k = ri.len();
        let mut m = vec![vec![0i128; k]; k];
        for (i, &r) in ri.iter().enumerate() {
            for (j, &c) in ci.iter().enumerate() {
                m[i][j] = rows[r][c] as i128;
            }
        }
        det_i128(&mut m)
    }

    fn det_i128(m: &mut Vec<Vec<i128>>) -> i128 {
        let n = m.len();
        match n {
            0 => 1,
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            _ => {
                let mut acc = 0i128;
                for j in 0..n {
                    let mut sub: Vec<Vec<i128>> = m[1..]
                        .iter()
                        .map(|row| {
                            row.iter()
                                .enumerate()
                                .filter(|(c, _)| *c != j)
                                .map(|(_, &v)| v)
                                .collect()
                        })
                        .collect();
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    acc += sign * m[0][j] * det_i128(&mut sub);
                }
                acc
            }
        }
    }

    fn gcd_i128(a: i128, b: i128) -> i128 {
        if b == 0 {
            a.abs()
        } else {
            gcd_i128(b, a % b)
        }
    }

    #[test]
    fn matches_minor_gcd_oracle_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed_517f);
        for _ in 0..120 {
            let rows: Vec<Vec<i64>> = (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(-5i64..=5)).collect())
                .collect();
            let got = snf_of(&rows);
            let want = minor_gcd_oracle(&rows);
            assert_eq!(got, want, "matrix {rows:?}");
        }
    }
}

//! Small exact linear algebra helpers: rational elimination, kernels,
//! primitive integer vectors, and the Smith normal form over Z.
//!
//! All matrices here are tiny (rank <= 5 root data), so dense row
//! reduction over `Ratio<i128>` is plenty.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Zero};

pub type Rat = Ratio<i128>;

pub fn rat(n: i64) -> Rat {
    Ratio::from_integer(n as i128)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &m[r][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Solve `A x = b` exactly. Returns `None` if inconsistent; when the system
/// is underdetermined the free variables are set to 0.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the augmented column
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the rational kernel of `A` (columns = unknowns).
pub fn kernel_basis(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<Rat>> = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Scale a nonzero rational vector to a primitive integer vector (gcd 1),
/// preserving direction.
pub fn primitive(v: &[Rat]) -> Vec<i64> {
    let lcm = v
        .iter()
        .fold(1i128, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i128> = v.iter().map(|x| x.numer() * (lcm / x.denom())).collect();
    let g = ints.iter().fold(0i128, |acc, &x| acc.gcd(&x));
    assert!(g != 0, "primitive() on the zero vector");
    ints.iter().map(|&x| (x / g) as i64).collect()
}

pub fn det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    let mut m = a.to_vec();
    let mut d = Rat::one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return Rat::zero();
        };
        if pr != c {
            m.swap(c, pr);
            d = -d;
        }
        d *= &m[c][c];
        let inv = m[c][c].recip();
        for j in c..n {
            let t = &m[c][j] * &inv;
            m[c][j] = t;
        }
        for i in (c + 1)..n {
            if !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..n {
                    let t = &m[c][j] * &f;
                    m[i][j] -= t;
                }
            }
        }
    }
    d
}

/// Smith normal form over Z: returns `(u, d, v)` with `d = u * a * v`,
/// `u`, `v` unimodular and `d` diagonal with divisibility down the diagonal.
pub fn smith(a: &[Vec<i64>]) -> (Vec<Vec<i128>>, Vec<Vec<i128>>, Vec<Vec<i128>>) {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut d: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // find a nonzero pivot in the remaining block
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| d[i][j] != 0)
            .min_by_key(|&(i, j)| d[i][j].abs())
        else {
            break;
        };
        swap_rows(&mut d, &mut u, t, pi);
        swap_cols(&mut d, &mut v, t, pj);
        // clear row and column t; restart if a remainder shrinks the pivot
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in (t + 1)..rows {
                if d[i][t] != 0 {
                    let q = div_round(d[i][t], d[t][t]);
                    row_op(&mut d, &mut u, i, t, q);
                    if d[i][t] != 0 {
                        swap_rows(&mut d, &mut u, t, i);
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..cols {
                if d[t][j] != 0 {
                    let q = div_round(d[t][j], d[t][t]);
                    col_op(&mut d, &mut v, j, t, q);
                    if d[t][j] != 0 {
                        swap_cols(&mut d, &mut v, t, j);
                        dirty = true;
                    }
                }
            }
        }
        t += 1;
    }
    // enforce divisibility d[t][t] | d[t+1][t+1]
    let k = rows.min(cols);
    let mut again = true;
    while again {
        again = false;
        for i in 0..k.saturating_sub(1) {
            let (x, y) = (d[i][i], d[i + 1][i + 1]);
            if x != 0 && y % x != 0 {
                // add column i+1 to column i, then re-reduce the 2x2 block
                for r in 0..rows {
                    d[r][i] += d[r][i + 1];
                }
                for r in 0..cols {
                    v[r][i] += v[r][i + 1];
                }
                let q = div_round(d[i + 1][i], d[i][i]);
                row_op(&mut d, &mut u, i + 1, i, q);
                if d[i + 1][i] != 0 {
                    swap_rows(&mut d, &mut u, i, i + 1);
                }
                // clear the block completely
                loop {
                    let mut moved = false;
                    if d[i + 1][i] != 0 {
                        let q = div_round(d[i + 1][i], d[i][i]);
                        row_op(&mut d, &mut u, i + 1, i, q);
                        if d[i + 1][i] != 0 {
                            swap_rows(&mut d, &mut u, i, i + 1);
                            moved = true;
                        }
                    }
                    if d[i][i + 1] != 0 {
                        let q = div_round(d[i][i + 1], d[i][i]);
                        col_op(&mut d, &mut v, i + 1, i, q);
                        if d[i][i + 1] != 0 {
                            swap_cols(&mut d, &mut v, i, i + 1);
                            moved = true;
                        }
                    }
                    if !moved {
                        break;
                    }
                }
                again = true;
            }
        }
    }
    for i in 0..k {
        if d[i][i] < 0 {
            for x in d[i].iter_mut() {
                *x = -*x;
            }
            for x in u[i].iter_mut() {
                *x = -*x;
            }
        }
    }
    (u, d, v)
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect()
}

fn swap_rows(d: &mut [Vec<i128>], u: &mut [Vec<i128>], a: usize, b: usize) {
    if a != b {
        d.swap(a, b);
        u.swap(a, b);
    }
}

fn swap_cols(d: &mut [Vec<i128>], v: &mut [Vec<i128>], a: usize, b: usize) {
    if a != b {
        for row in d.iter_mut() {
            row.swap(a, b);
        }
        for row in v.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// row i -= q * row t (applied to d and u together)
fn row_op(d: &mut [Vec<i128>], u: &mut [Vec<i128>], i: usize, t: usize, q: i128) {
    if q != 0 {
        for j in 0..d[i].len() {
            d[i][j] -= q * d[t][j];
        }
        for j in 0..u[i].len() {
            u[i][j] -= q * u[t][j];
        }
    }
}

/// col j -= q * col t (applied to d and v together)
fn col_op(d: &mut [Vec<i128>], v: &mut [Vec<i128>], j: usize, t: usize, q: i128) {
    if q != 0 {
        for row in d.iter_mut() {
            let x = row[t];
            row[j] -= q * x;
        }
        for row in v.iter_mut() {
            let x = row[t];
            row[j] -= q * x;
        }
    }
}

fn div_round(a: i128, b: i128) -> i128 {
    // rounded division so remainders shrink in absolute value
    let q = a.div_euclid(b.abs());
    let r = a.rem_euclid(b.abs());
    let q = if 2 * r > b.abs() { q + 1 } else { q };
    if b < 0 {
        -q
    } else {
        q
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_rat(m: &[Vec<i64>]) -> Vec<Vec<Rat>> {
        m.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn solve_unique() {
        let a = to_rat(&[vec![2, 0], vec![0, 3]]);
        let b = vec![rat(4), rat(9)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![rat(2), rat(3)]);
    }

    #[test]
    fn solve_inconsistent() {
        let a = to_rat(&[vec![1, 1], vec![1, 1]]);
        assert!(solve(&a, &[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn kernel_of_rank_one() {
        let a = to_rat(&[vec![1, 1, 1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let s: Rat = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn smith_small() {
        let a = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]];
        let (u, d, v) = smith(&a);
        // d = u a v
        let rows = 3;
        for i in 0..rows {
            for j in 0..rows {
                let mut s = 0i128;
                for k in 0..rows {
                    for l in 0..rows {
                        s += u[i][k] * (a[k][l] as i128) * v[l][j];
                    }
                }
                assert_eq!(s, d[i][j], "entry ({i},{j})");
            }
        }
        // diagonal, with divisibility
        for i in 0..rows {
            for j in 0..rows {
                if i != j {
                    assert_eq!(d[i][j], 0);
                }
            }
        }
        assert!(d[0][0] != 0 && d[1][1] % d[0][0] == 0 && d[2][2] % d[1][1] == 0);
    }

    #[test]
    fn primitive_scales() {
        let v = vec![Rat::new(2, 3), Rat::new(4, 3)];
        assert_eq!(primitive(&v), vec![1, 2]);
    }

    #[test]
    fn det_matches_cofactor() {
        let a = to_rat(&[vec![1, 2], vec![3, 4]]);
        assert_eq!(det(&a), rat(-2));
    }
}

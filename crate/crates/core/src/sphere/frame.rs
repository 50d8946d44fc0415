use crate::numerics::{dot, norm};

/// Orthonormal basis of v⊥ (v a unit vector), built by Gram–Schmidt from the
/// coordinate axes taken in order of increasing |v_j|, ties broken by index.
pub fn orthonormal_complement(v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(a.cmp(&b)));
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n - 1);
    for &j in &order {
        if basis.len() == n - 1 {
            break;
        }
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            let c = dot(&e, v);
            e.iter_mut().zip(v).for_each(|(x, y)| *x -= c * y);
            for b in &basis {
                let c = dot(&e, b);
                e.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let r = norm(&e);
        if r > 1e-8 {
            e.iter_mut().for_each(|x| *x /= r);
            basis.push(e);
        }
    }
    basis
}

/// Scales `v` to unit length in place and returns the original length.
pub fn normalize(v: &mut [f64]) -> f64 {
    let r = norm(v);
    v.iter_mut().for_each(|x| *x /= r);
    r
}

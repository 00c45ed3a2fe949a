//! Trilinear brick element on an axis-aligned box.

use super::mesh::LOCAL_CORNERS;

/// Gauss–Legendre nodes and weights on `[−1, 1]` for 1 to 5 points.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    match n {
        1 => vec![(0.0, 2.0)],
        2 => {
            let a = 1.0 / 3f64.sqrt();
            vec![(-a, 1.0), (a, 1.0)]
        }
        3 => {
            let a = (0.6f64).sqrt();
            vec![(-a, 5.0 / 9.0), (0.0, 8.0 / 9.0), (a, 5.0 / 9.0)]
        }
        4 => {
            let t = 2.0 / 7.0 * (6.0f64 / 5.0).sqrt();
            let (a, b) = ((3.0 / 7.0 - t).sqrt(), (3.0 / 7.0 + t).sqrt());
            let (wa, wb) = (
                (18.0 + 30f64.sqrt()) / 36.0,
                (18.0 - 30f64.sqrt()) / 36.0,
            );
            vec![(-b, wb), (-a, wa), (a, wa), (b, wb)]
        }
        5 => {
            let t = 2.0 * (10.0f64 / 7.0).sqrt();
            let (a, b) = ((5.0 - t).sqrt() / 3.0, (5.0 + t).sqrt() / 3.0);
            let (wa, wb) = (
                (322.0 + 13.0 * 70f64.sqrt()) / 900.0,
                (322.0 - 13.0 * 70f64.sqrt()) / 900.0,
            );
            vec![(-b, wb), (-a, wa), (0.0, 128.0 / 225.0), (a, wa), (b, wb)]
        }
        _ => panic!("gauss_legendre: {n} points not tabulated"),
    }
}

fn corner_sign(c: usize) -> f64 {
    if c == 0 {
        -1.0
    } else {
        1.0
    }
}

/// Physical gradients of the eight shape functions at reference point `xi`.
pub fn shape_gradients(h: [f64; 3], xi: [f64; 3]) -> [[f64; 3]; 8] {
    let mut out = [[0.0; 3]; 8];
    for (a, c) in LOCAL_CORNERS.iter().enumerate() {
        let s = c.map(corner_sign);
        let f = [0, 1, 2].map(|d| 1.0 + s[d] * xi[d]);
        out[a] = [
            0.125 * s[0] * f[1] * f[2] * 2.0 / h[0],
            0.125 * f[0] * s[1] * f[2] * 2.0 / h[1],
            0.125 * f[0] * f[1] * s[2] * 2.0 / h[2],
        ];
    }
    out
}

/// Shape function values at reference point `xi`.
pub fn shape_values(xi: [f64; 3]) -> [f64; 8] {
    LOCAL_CORNERS.map(|c| {
        let s = c.map(corner_sign);
        0.125 * (1.0 + s[0] * xi[0]) * (1.0 + s[1] * xi[1]) * (1.0 + s[2] * xi[2])
    })
}

fn tensor_points(n: usize) -> Vec<([f64; 3], f64)> {
    let g = gauss_legendre(n);
    let mut out = Vec::with_capacity(n * n * n);
    for &(z, wz) in &g {
        for &(y, wy) in &g {
            for &(x, wx) in &g {
                out.push(([x, y, z], wx * wy * wz));
            }
        }
    }
    out
}

/// `∫ ∇v_a · ∇v_b` over a brick with edge lengths `h`, using `n`-point Gauss per axis.
pub fn element_gradient_matrix(h: [f64; 3], n: usize) -> [[f64; 8]; 8] {
    let det = h[0] * h[1] * h[2] / 8.0;
    let mut g = [[0.0; 8]; 8];
    for (xi, w) in tensor_points(n) {
        let grads = shape_gradients(h, xi);
        for a in 0..8 {
            for b in 0..8 {
                let dot: f64 = (0..3).map(|d| grads[a][d] * grads[b][d]).sum();
                g[a][b] += w * det * dot;
            }
        }
    }
    g
}

/// `∫ ∇v_a` over a brick, one vector per local node.
pub fn element_gradient_integrals(h: [f64; 3]) -> [[f64; 3]; 8] {
    let det = h[0] * h[1] * h[2] / 8.0;
    let mut out = [[0.0; 3]; 8];
    for (xi, w) in tensor_points(2) {
        let grads = shape_gradients(h, xi);
        for a in 0..8 {
            for d in 0..3 {
                out[a][d] += w * det * grads[a][d];
            }
        }
    }
    out
}

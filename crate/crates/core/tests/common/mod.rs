#![allow(dead_code)]

use ovb_core::Dataset;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normals(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

pub fn x_names(k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("x{i}")).collect()
}

pub fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

/// Columns y, d, z, x1..xk with z correlated with x1 and everything
/// entangled through random coefficients.
pub fn entangled(seed: u64, n: usize, k: usize) -> Dataset {
    let mut r = rng(seed);
    let xs: Vec<Vec<f64>> = (0..k).map(|_| normals(&mut r, n)).collect();
    let rho: f64 = r.random_range(-0.8..0.8);
    let e = normals(&mut r, n);
    let z: Vec<f64> = (0..n)
        .map(|i| xs.first().map_or(0.0, |x| rho * x[i]) + e[i])
        .collect();
    let mut lin = |target: &[f64], extra: &[&[f64]]| -> Vec<f64> {
        let coefs: Vec<f64> = (0..k + extra.len()).map(|_| r.random_range(-1.0..1.0)).collect();
        let noise = normals(&mut r, n);
        (0..n)
            .map(|i| {
                target[i]
                    + xs.iter().zip(&coefs).map(|(x, c)| c * x[i]).sum::<f64>()
                    + extra.iter().zip(&coefs[k..]).map(|(x, c)| c * x[i]).sum::<f64>()
                    + noise[i]
            })
            .collect()
    };
    let zero = vec![0.0; n];
    let d = lin(&zero, &[&z]);
    let y = lin(&zero, &[&z, &d]);
    let mut cols = vec![("y".to_string(), y), ("d".to_string(), d), ("z".to_string(), z)];
    cols.extend(x_names(k).into_iter().zip(xs));
    Dataset::new(cols).unwrap()
}

/// Pearson correlation, written independently of the library.
pub fn corr(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        sab += (x - ma) * (y - mb);
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

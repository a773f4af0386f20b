//! Grids, quadrature, finite differences and series-tail bookkeeping.

use crate::error::{Error, Result};

/// Uniform grid on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    points: usize,
}

impl GridSpec {
    /// At least 16 points, `x_min < x_max`, both finite.
    pub fn new(x_min: f64, x_max: f64, points: usize) -> Result<Self> {
        if !x_min.is_finite() || !x_max.is_finite() || x_min >= x_max {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must be finite with x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if points < 16 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 16 points, got {points}"
            )));
        }
        Ok(Self { x_min, x_max, points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.points - 1) as f64
    }

    pub fn samples(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|i| self.x_min + h * i as f64).collect()
    }
}

fn check_len(grid: &GridSpec, values: &[f64]) -> Result<()> {
    if values.len() != grid.points() {
        return Err(Error::LengthMismatch {
            expected: grid.points(),
            got: values.len(),
        });
    }
    Ok(())
}

/// Composite trapezoid rule, O(h^2) on generic smooth integrands (much better
/// when the integrand and its derivatives vanish at the ends).
pub fn trapezoid(grid: &GridSpec, values: &[f64]) -> Result<f64> {
    check_len(grid, values)?;
    Ok(trapezoid_uniform(values, grid.spacing()))
}

pub(crate) fn trapezoid_uniform(values: &[f64], h: f64) -> f64 {
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * values[0] + inner + 0.5 * values[values.len() - 1])
}

/// Composite Simpson rule, O(h^4). An odd interval count is closed with a
/// single trapezoid panel at the right end.
pub fn simpson(grid: &GridSpec, values: &[f64]) -> Result<f64> {
    check_len(grid, values)?;
    let h = grid.spacing();
    let n = values.len();
    let intervals = n - 1;
    let even_intervals = intervals - intervals % 2;
    let mut sum = 0.0;
    let mut i = 0;
    while i + 2 <= even_intervals {
        sum += h / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
        i += 2;
    }
    if intervals % 2 == 1 {
        sum += 0.5 * h * (values[n - 2] + values[n - 1]);
    }
    Ok(sum)
}

/// Central difference `(f(x+h) - f(x-h)) / 2h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}

/// Outcome of a tail-controlled series truncation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesTruncation {
    pub tol: f64,
    pub hard_cap: usize,
    pub achieved_m: usize,
    pub tail_bound: f64,
}

/// Nodes and weights of the n-point Gauss-Hermite rule for
/// `int exp(-t^2) f(t) dt`; exact for polynomials of degree `2n - 1`.
///
/// Newton iteration on the orthonormal Hermite recurrence; used for
/// inner-product audits where the uniform-grid quadrature is the default.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 || n > 512 {
        return Err(Error::InvalidParameter(format!(
            "gauss_hermite order must be in 1..=512, got {n}"
        )));
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let pi_inv_quarter = std::f64::consts::PI.powf(-0.25);
    // Roots come in +/- pairs; solve for the positive half, largest first.
    let m = n.div_ceil(2);
    let mut z = 0.0_f64;
    for i in 0..m {
        z = match i {
            0 => {
                let a = (2 * n + 1) as f64;
                a.sqrt() - 1.85575 * a.powf(-1.0 / 6.0)
            }
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * nodes[0],
            3 => 1.91 * z - 0.91 * nodes[1],
            _ => 2.0 * z - nodes[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            // Orthonormal recurrence: p_{j+1} = z sqrt(2/(j+1)) p_j - sqrt(j/(j+1)) p_{j-1}.
            let mut p1 = pi_inv_quarter;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2
                    - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let dz = p1 / pp;
            z -= dz;
            if dz.abs() < 1e-15 * (1.0 + z.abs()) {
                break;
            }
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    nodes.reverse(); // ascending
    weights.reverse();
    Ok((nodes, weights))
}

//! Published Monte Carlo moments and rejection rates, with grading tolerances.

// -3.14 in the tables is data, not pi.
#![allow(clippy::approx_constant)]

/// `(N, T, mean by c_sigma, variance x 100 by c_sigma)` for c_sigma in 0.1, 0.5, 1, 1.5.
pub type MomentRow = (usize, usize, [f64; 4], [f64; 4]);

/// `(N, T, rates)`; rates in percent for the design columns sym/indep,
/// sym/f(lambda), skew/indep, skew/f(lambda), each as CD_W, CD_W+, CD_BC.
pub type RateRow = (usize, usize, [f64; 12]);

pub const T1A: [MomentRow; 8] = [
    (25, 25, [-3.53, -3.5, -3.41, -3.24], [0.09, 0.2, 0.82, 2.96]),
    (25, 50, [-5.05, -5.01, -4.88, -4.63], [0.03, 0.14, 0.94, 4.07]),
    (25, 100, [-7.18, -7.12, -6.94, -6.57], [0.02, 0.15, 1.33, 6.1]),
    (25, 200, [-10.18, -10.09, -9.83, -9.3], [0.01, 0.21, 2.12, 10.48]),
    (200, 25, [-3.47, -3.44, -3.34, -3.14], [0.05, 0.11, 0.43, 1.67]),
    (200, 50, [-4.96, -4.92, -4.78, -4.49], [0.01, 0.05, 0.32, 1.48]),
    (200, 100, [-7.05, -6.99, -6.79, -6.39], [0.0, 0.04, 0.37, 1.85]),
    (200, 200, [-10.0, -9.91, -9.63, -9.06], [0.0, 0.04, 0.42, 2.25]),
];

pub const T1B: [MomentRow; 8] = [
    (25, 25, [-3.53, -3.5, -3.41, -3.25], [0.11, 0.23, 0.87, 3.0]),
    (25, 50, [-5.05, -5.01, -4.88, -4.64], [0.04, 0.15, 0.89, 3.71]),
    (25, 100, [-7.18, -7.12, -6.95, -6.61], [0.02, 0.15, 1.25, 5.58]),
    (25, 200, [-10.18, -10.1, -9.85, -9.37], [0.01, 0.21, 2.1, 9.77]),
    (200, 25, [-3.46, -3.43, -3.33, -3.14], [0.06, 0.13, 0.48, 1.77]),
    (200, 50, [-4.96, -4.91, -4.77, -4.5], [0.02, 0.06, 0.35, 1.63]),
    (200, 100, [-7.05, -6.99, -6.79, -6.4], [0.0, 0.04, 0.34, 1.79]),
    (200, 200, [-10.0, -9.91, -9.63, -9.08], [0.0, 0.04, 0.42, 2.27]),
];

pub const T4A: [RateRow; 16] = [
    (25, 25, [5.3, 5.5, 2.7, 6.2, 6.4, 2.8, 5.3, 5.5, 3.1, 5.2, 5.3, 2.5]),
    (25, 50, [6.6, 6.9, 4.3, 5.8, 6.1, 4.1, 6.2, 6.8, 4.0, 6.3, 6.4, 2.7]),
    (25, 100, [7.8, 8.5, 3.7, 7.0, 7.1, 4.6, 6.5, 6.9, 4.5, 6.4, 6.6, 2.2]),
    (25, 200, [9.8, 10.3, 5.6, 9.0, 10.0, 6.1, 9.3, 9.6, 6.1, 8.9, 9.4, 3.3]),
    (50, 25, [4.6, 4.7, 2.8, 4.7, 4.7, 3.7, 4.6, 4.6, 2.9, 5.9, 5.9, 2.9]),
    (50, 50, [6.1, 6.2, 3.4, 5.2, 5.4, 5.0, 5.4, 5.3, 4.4, 4.5, 4.6, 2.7]),
    (50, 100, [5.5, 5.9, 4.7, 5.4, 5.8, 4.8, 5.8, 6.0, 4.2, 5.1, 5.6, 3.1]),
    (50, 200, [6.0, 6.5, 4.6, 6.1, 6.3, 4.9, 6.4, 6.2, 4.7, 5.7, 5.7, 3.4]),
    (100, 25, [5.0, 5.0, 2.8, 5.2, 5.2, 3.4, 5.9, 5.9, 3.8, 4.7, 4.7, 2.9]),
    (100, 50, [5.0, 5.1, 3.5, 4.6, 4.8, 3.9, 4.4, 4.5, 4.0, 5.0, 5.1, 2.9]),
    (100, 100, [5.3, 5.3, 5.1, 5.1, 5.1, 3.9, 4.8, 5.0, 3.7, 5.5, 5.5, 3.5]),
    (100, 200, [4.5, 4.5, 4.7, 5.4, 5.3, 4.5, 5.8, 5.6, 4.0, 6.2, 6.3, 3.1]),
    (200, 25, [5.5, 5.5, 3.3, 5.5, 5.5, 3.6, 4.7, 4.7, 3.4, 4.7, 4.7, 3.2]),
    (200, 50, [5.4, 5.5, 4.4, 5.5, 5.6, 3.2, 5.5, 5.6, 4.2, 4.7, 4.8, 3.6]),
    (200, 100, [4.3, 4.3, 4.6, 6.1, 6.2, 4.4, 4.5, 4.5, 4.6, 4.9, 4.9, 3.2]),
    (200, 200, [4.5, 4.8, 4.3, 5.1, 5.3, 4.6, 5.1, 5.1, 4.7, 6.2, 6.3, 3.4]),
];

pub const T4B: [RateRow; 16] = [
    (
        25,
        25,
        [12.4, 18.5, 8.6, 10.3, 11.4, 7.7, 11.5, 16.3, 17.8, 12.5, 14.9, 27.4],
    ),
    (
        25,
        50,
        [21.9, 81.7, 16.3, 17.0, 38.9, 11.1, 18.9, 52.9, 35.1, 24.2, 56.9, 50.7],
    ),
    (
        25,
        100,
        [36.2, 100.0, 25.9, 27.2, 92.5, 22.1, 31.0, 90.6, 50.7, 38.5, 95.8, 71.1],
    ),
    (
        25,
        200,
        [51.4, 100.0, 41.7, 43.9, 100.0, 33.5, 44.3, 99.4, 67.0, 52.8, 99.9, 83.1],
    ),
    (
        50,
        25,
        [12.3, 15.5, 8.5, 10.8, 11.1, 6.7, 12.3, 17.7, 42.3, 14.2, 14.5, 65.1],
    ),
    (
        50,
        50,
        [20.3, 96.3, 15.9, 16.7, 39.9, 12.5, 19.8, 79.1, 65.6, 22.8, 66.6, 89.1],
    ),
    (
        50,
        100,
        [34.7, 100.0, 26.7, 27.9, 99.2, 24.2, 32.2, 99.8, 85.0, 37.1, 99.9, 97.2],
    ),
    (
        50,
        200,
        [
            52.9, 100.0, 41.4, 43.1, 100.0, 36.9, 47.0, 100.0, 92.0, 54.7, 100.0, 99.2,
        ],
    ),
    (
        100,
        25,
        [10.7, 11.0, 8.4, 9.3, 9.4, 6.7, 11.3, 14.9, 81.1, 13.3, 13.5, 96.8],
    ),
    (
        100,
        50,
        [20.3, 98.9, 14.9, 17.2, 40.5, 12.8, 18.1, 97.1, 96.6, 20.8, 81.8, 99.9],
    ),
    (
        100,
        100,
        [
            33.4, 100.0, 26.4, 27.9, 100.0, 22.8, 29.1, 100.0, 99.6, 34.2, 100.0, 100.0,
        ],
    ),
    (
        100,
        200,
        [
            50.2, 100.0, 41.5, 41.9, 100.0, 39.2, 47.3, 100.0, 100.0, 52.4, 100.0, 100.0,
        ],
    ),
    (
        200,
        25,
        [11.6, 11.6, 8.8, 11.3, 11.3, 6.9, 11.5, 12.2, 98.6, 12.4, 12.4, 100.0],
    ),
    (
        200,
        50,
        [19.2, 99.6, 16.2, 15.2, 34.2, 13.4, 18.5, 99.9, 100.0, 23.8, 87.0, 100.0],
    ),
    (
        200,
        100,
        [
            34.9, 100.0, 26.4, 25.5, 100.0, 22.8, 30.3, 100.0, 100.0, 37.8, 100.0, 100.0,
        ],
    ),
    (
        200,
        200,
        [
            49.8, 100.0, 44.3, 40.7, 100.0, 38.5, 45.9, 100.0, 100.0, 52.3, 100.0, 100.0,
        ],
    ),
];

pub const T5A: [RateRow; 16] = [
    (25, 25, [5.9, 5.9, 4.2, 5.3, 5.6, 4.6, 5.3, 5.4, 4.3, 5.9, 6.3, 5.8]),
    (25, 50, [6.4, 6.9, 4.5, 5.7, 6.2, 5.3, 6.2, 6.8, 4.9, 7.6, 8.1, 7.3]),
    (25, 100, [8.3, 9.0, 6.1, 7.9, 8.4, 6.6, 7.9, 9.0, 7.0, 9.2, 9.9, 12.9]),
    (
        25,
        200,
        [11.2, 12.2, 6.8, 10.3, 11.3, 8.2, 11.4, 11.7, 9.5, 12.4, 14.0, 22.0],
    ),
    (50, 25, [5.9, 6.1, 4.1, 6.2, 6.4, 5.0, 6.3, 6.4, 4.4, 6.6, 6.6, 4.3]),
    (50, 50, [6.4, 6.7, 4.4, 5.8, 5.9, 4.0, 5.5, 5.7, 3.9, 6.2, 6.4, 5.3]),
    (50, 100, [6.1, 6.3, 5.4, 5.9, 6.0, 5.9, 6.1, 6.1, 4.7, 5.7, 5.9, 10.4]),
    (50, 200, [7.3, 7.2, 5.0, 6.4, 6.3, 6.5, 7.2, 7.6, 6.3, 7.6, 7.9, 19.5]),
    (100, 25, [5.2, 5.2, 4.5, 5.5, 5.5, 4.2, 5.4, 5.4, 4.2, 5.3, 5.3, 4.2]),
    (100, 50, [5.0, 5.1, 3.8, 4.8, 4.9, 4.9, 5.3, 5.5, 5.9, 5.2, 5.2, 5.6]),
    (100, 100, [5.6, 5.8, 4.9, 6.0, 5.9, 5.7, 4.6, 4.8, 4.0, 7.0, 7.0, 8.6]),
    (100, 200, [5.4, 5.5, 4.9, 5.9, 5.9, 6.2, 5.7, 6.0, 5.1, 5.8, 5.8, 18.6]),
    (200, 25, [5.3, 5.3, 3.8, 5.1, 5.1, 3.9, 5.3, 5.3, 4.5, 5.4, 5.4, 5.1]),
    (200, 50, [4.3, 4.4, 4.4, 4.9, 4.9, 4.9, 5.3, 5.3, 4.2, 5.0, 5.0, 5.3]),
    (200, 100, [4.5, 4.6, 4.5, 5.6, 5.6, 4.4, 5.2, 5.4, 5.5, 6.3, 6.4, 9.7]),
    (200, 200, [4.4, 4.7, 5.1, 5.8, 5.8, 5.1, 5.2, 5.3, 5.2, 5.0, 5.1, 16.5]),
];

pub const T5B: [RateRow; 16] = [
    (
        25,
        25,
        [10.0, 11.8, 5.4, 8.9, 9.5, 6.2, 9.0, 12.2, 7.4, 10.5, 11.4, 7.4],
    ),
    (
        25,
        50,
        [13.8, 39.6, 10.4, 12.5, 18.9, 9.4, 13.4, 31.4, 13.6, 16.5, 29.6, 16.1],
    ),
    (
        25,
        100,
        [21.3, 81.9, 15.4, 17.1, 44.4, 14.6, 19.0, 62.2, 20.2, 24.5, 63.1, 28.1],
    ),
    (
        25,
        200,
        [31.8, 97.5, 22.9, 26.1, 85.1, 20.8, 30.3, 84.6, 28.8, 36.5, 90.2, 43.2],
    ),
    (50, 25, [9.6, 11.2, 5.9, 8.0, 8.3, 6.9, 9.0, 11.2, 7.8, 10.6, 10.8, 9.3]),
    (
        50,
        50,
        [14.3, 54.2, 8.6, 10.3, 16.0, 8.4, 11.7, 52.8, 12.7, 15.2, 34.1, 20.0],
    ),
    (
        50,
        100,
        [19.6, 98.5, 13.7, 16.5, 59.5, 15.3, 17.8, 90.5, 23.1, 22.2, 86.4, 29.7],
    ),
    (
        50,
        200,
        [29.4, 100.0, 23.0, 20.8, 98.3, 24.5, 27.8, 99.2, 34.5, 32.7, 100.0, 45.2],
    ),
    (100, 25, [8.2, 8.1, 5.1, 8.4, 8.4, 5.3, 8.1, 9.7, 7.0, 9.7, 9.7, 10.9]),
    (
        100,
        50,
        [12.3, 64.8, 9.4, 10.9, 15.5, 10.0, 11.2, 74.7, 15.3, 13.4, 38.6, 20.5],
    ),
    (
        100,
        100,
        [20.2, 99.9, 15.7, 15.5, 76.4, 15.3, 16.6, 99.4, 24.9, 20.2, 97.3, 35.6],
    ),
    (
        100,
        200,
        [
            29.3, 100.0, 23.8, 22.8, 100.0, 24.8, 26.0, 100.0, 40.3, 32.0, 100.0, 50.4,
        ],
    ),
    (200, 25, [8.9, 8.9, 7.0, 8.2, 8.2, 5.9, 8.8, 9.0, 8.6, 9.9, 10.0, 10.8]),
    (
        200,
        50,
        [13.7, 72.9, 8.3, 10.8, 15.0, 10.5, 11.7, 90.4, 15.8, 14.1, 39.6, 18.5],
    ),
    (
        200,
        100,
        [17.5, 100.0, 14.6, 13.4, 86.7, 14.5, 17.0, 100.0, 27.5, 20.4, 99.7, 32.7],
    ),
    (
        200,
        200,
        [
            29.7, 100.0, 22.8, 22.5, 100.0, 25.3, 25.7, 100.0, 45.4, 32.1, 100.0, 52.6,
        ],
    ),
];
/// Design columns of the rejection-rate tables, in table order.
pub const RATE_COLUMNS: [&str; 4] = ["sym/indep", "sym/f(lambda)", "skew/indep", "skew/f(lambda)"];

/// Values of `c_sigma` in the moment tables, in table order.
pub const C_SIGMAS: [f64; 4] = [0.1, 0.5, 1.0, 1.5];

/// Tolerance on a published mean of CD.
pub const MEAN_TOL: f64 = 0.05;

/// A published value and the band within which a replication agrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Reference {
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }
}

fn symmetric(value: f64, tol: f64) -> Reference {
    Reference {
        value,
        lower: value - tol,
        upper: value + tol,
    }
}

/// Band for a published variance x 100: 50% relative or 0.05 absolute,
/// whichever is wider.
pub fn variance_reference(value: f64) -> Reference {
    symmetric(value, (0.5 * value.abs()).max(0.05))
}

/// Band for a published rejection rate in percent, replicated with `reps`
/// draws: the wider of 1.5 points and three binomial standard errors.
pub fn rate_reference(percent: f64, reps: usize) -> Reference {
    let p = percent / 100.0;
    let se = (p * (1.0 - p) / reps.max(1) as f64).sqrt() * 100.0;
    let r = symmetric(percent, (3.0 * se).max(1.5));
    Reference {
        lower: r.lower.max(0.0),
        upper: r.upper.min(100.0),
        ..r
    }
}

/// Published `(mean, variance x 100)` of CD in a moment table cell.
pub fn moment(table: &str, n: usize, t: usize, c_sigma: f64) -> Option<(f64, f64)> {
    let rows: &[MomentRow] = match table {
        "T1A" => &T1A,
        "T1B" => &T1B,
        _ => return None,
    };
    let k = C_SIGMAS.iter().position(|&c| (c - c_sigma).abs() < 1e-12)?;
    rows.iter().find(|r| r.0 == n && r.1 == t).map(|r| (r.2[k], r.3[k]))
}

/// Published rejection rate in percent; `stat` is `CD_W`, `CD_W+` or `CD_BC`.
pub fn rate(table: &str, n: usize, t: usize, column: &str, stat: &str) -> Option<f64> {
    let rows: &[RateRow] = match table {
        "T4A" => &T4A,
        "T4B" => &T4B,
        "T5A" => &T5A,
        "T5B" => &T5B,
        _ => return None,
    };
    let c = RATE_COLUMNS.iter().position(|&l| l == column)?;
    let s = ["CD_W", "CD_W+", "CD_BC"].iter().position(|&l| l == stat)?;
    rows.iter().find(|r| r.0 == n && r.1 == t).map(|r| r.2[3 * c + s])
}

//! Shared helpers for integration tests.
#![allow(dead_code)]

pub mod closed_forms;

use helmstab::specfun::{bessel_jy_scaled, Argument, Order};

pub struct GridRow {
    pub nu: f64,
    pub z: f64,
    pub j: f64,
    pub y: f64,
}

/// Frozen reference values of J_ν(z), Y_ν(z) on ν ∈ {0, 0.5, …, 50},
/// z ∈ {0.1·1.2ⁿ ≤ 200}.
pub fn bessel_grid() -> Vec<GridRow> {
    let text = include_str!("../data/bessel_grid.csv");
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("nu"))
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|t| t.parse().unwrap()).collect();
            GridRow {
                nu: f[0],
                z: f[1],
                j: f[2],
                y: f[3],
            }
        })
        .collect()
}

#[derive(Debug, Default)]
pub struct ErrorReport {
    pub worst_hankel: f64,
    pub worst_j: f64,
    pub worst_y: f64,
    pub at_hankel: (f64, f64),
    pub at_j: (f64, f64),
    pub at_y: (f64, f64),
}

/// Relative errors against the reference grid.
///
/// H⁽¹⁾ never vanishes, so its error is relative to |H|. J and Y have no
/// zeros for z ≤ ν and are measured relative to themselves there; past the
/// turning point they oscillate through zeros and are measured relative to
/// the local amplitude |H|.
pub fn rel_error_report(grid: &[GridRow]) -> ErrorReport {
    let mut r = ErrorReport::default();
    for row in grid {
        let (j, y) = bessel_jy_scaled(Order::new(row.nu).unwrap(), Argument::new(row.z).unwrap());
        let (j, y) = (j.value(), y.value());
        let amp = row.j.hypot(row.y);
        let eh = (j - row.j).hypot(y - row.y) / amp;
        let (sj, sy) = if row.z <= row.nu {
            (row.j.abs(), row.y.abs())
        } else {
            (amp, amp)
        };
        let ej = (j - row.j).abs() / sj;
        let ey = (y - row.y).abs() / sy;
        if eh > r.worst_hankel {
            r.worst_hankel = eh;
            r.at_hankel = (row.nu, row.z);
        }
        if ej > r.worst_j {
            r.worst_j = ej;
            r.at_j = (row.nu, row.z);
        }
        if ey > r.worst_y {
            r.worst_y = ey;
            r.at_y = (row.nu, row.z);
        }
    }
    r
}

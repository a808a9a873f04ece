use serde::Serialize;

use crate::echo::EchoCurve;
use crate::error::{Error, Result};
use crate::spectrum::grid_modes;

/// Local maxima of an echo curve found after its first drop below the
/// threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Revivals {
    /// Interpolated peak times, ascending.
    pub times: Vec<f64>,
    /// Interpolated peak heights.
    pub values: Vec<f64>,
    /// False when the curve never fell below the threshold.
    pub decayed: bool,
}

impl Revivals {
    pub fn first(&self) -> Option<f64> {
        self.times.first().copied()
    }
}

/// Largest phase advance per sample allowed by [`find_revival_times`].
pub const MAX_PHASE_PER_STEP: f64 = 0.5;

/// Revival peaks above `threshold`, located by fitting a parabola through
/// each discrete maximum and its two neighbours.
pub fn find_revival_times(curve: &EchoCurve, threshold: f64) -> Result<Revivals> {
    let eps_max = grid_modes(&curve.params, &curve.grid)
        .iter()
        .map(|m| m.eps_e)
        .fold(0.0, f64::max);
    let dt_max = curve
        .times
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    let phase = eps_max * dt_max;
    if phase >= MAX_PHASE_PER_STEP {
        return Err(Error::Undersampled {
            dt: dt_max,
            eps_max,
            phase,
        });
    }

    let v = &curve.values;
    let t = &curve.times;
    let Some(first_drop) = v.iter().position(|&x| x < threshold) else {
        return Ok(Revivals {
            times: Vec::new(),
            values: Vec::new(),
            decayed: false,
        });
    };

    let mut times = Vec::new();
    let mut values = Vec::new();
    for i in (first_drop + 1)..v.len().saturating_sub(1) {
        if v[i] > threshold && v[i] > v[i - 1] && v[i] >= v[i + 1] {
            let (tp, vp) =
                parabola_vertex((t[i - 1], v[i - 1]), (t[i], v[i]), (t[i + 1], v[i + 1]));
            times.push(tp);
            values.push(vp);
        }
    }
    Ok(Revivals {
        times,
        values,
        decayed: true,
    })
}

/// Vertex of the parabola through three points; falls back to the middle
/// point when they are collinear.
fn parabola_vertex(p0: (f64, f64), p1: (f64, f64), p2: (f64, f64)) -> (f64, f64) {
    let (x0, y0) = p0;
    let (x1, y1) = p1;
    let (x2, y2) = p2;
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let curv = (d12 - d01) / (x2 - x0);
    if curv >= 0.0 {
        return p1;
    }
    // y = y1 + b (x - x1) + curv (x - x1)^2 with b from the divided differences
    let b = d01 + curv * (x1 - x0);
    let dx = -b / (2.0 * curv);
    (x1 + dx, y1 + b * dx + curv * dx * dx)
}

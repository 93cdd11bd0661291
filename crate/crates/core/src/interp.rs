//! Monotone piecewise-cubic Hermite interpolation (Fritsch-Carlson).

use crate::error::{out_of_domain, Error, Result};

#[derive(Clone, Debug)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: y.len(),
            });
        }
        if x.len() < 2 {
            return Err(Error::InvalidParameter(
                "interpolation table needs at least two rows".into(),
            ));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("interpolation table has non-finite entries".into()));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "interpolation abscissae must be strictly increasing".into(),
            ));
        }
        let n = x.len();
        let secant: Vec<f64> = (0..n - 1)
            .map(|i| (y[i + 1] - y[i]) / (x[i + 1] - x[i]))
            .collect();
        let mut slopes = vec![0.0; n];
        slopes[0] = secant[0];
        slopes[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            slopes[i] = if secant[i - 1] * secant[i] <= 0.0 {
                0.0
            } else {
                0.5 * (secant[i - 1] + secant[i])
            };
        }
        for i in 0..n - 1 {
            if secant[i] == 0.0 {
                slopes[i] = 0.0;
                slopes[i + 1] = 0.0;
                continue;
            }
            let alpha = slopes[i] / secant[i];
            let beta = slopes[i + 1] / secant[i];
            let r = alpha * alpha + beta * beta;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                slopes[i] = tau * alpha * secant[i];
                slopes[i + 1] = tau * beta * secant[i];
            }
        }
        Ok(MonotoneCubic { x, y, slopes })
    }

    pub fn range(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    pub fn knots(&self) -> &[f64] {
        &self.x
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    fn segment(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.range();
        if !(lo..=hi).contains(&t) {
            return Err(out_of_domain("interpolation abscissa", t, (lo, hi)));
        }
        let i = self.x.partition_point(|&k| k <= t);
        Ok(i.saturating_sub(1).min(self.x.len() - 2))
    }

    // Hermite basis coefficients of segment i in the local variable u = t - x_i:
    // p(u) = c0 + c1 u + c2 u^2 + c3 u^3
    fn coefficients(&self, i: usize) -> [f64; 4] {
        let h = self.x[i + 1] - self.x[i];
        let dy = (self.y[i + 1] - self.y[i]) / h;
        let m0 = self.slopes[i];
        let m1 = self.slopes[i + 1];
        [
            self.y[i],
            m0,
            (3.0 * dy - 2.0 * m0 - m1) / h,
            (m0 + m1 - 2.0 * dy) / (h * h),
        ]
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        let i = self.segment(t)?;
        let c = self.coefficients(i);
        let u = t - self.x[i];
        Ok(c[0] + u * (c[1] + u * (c[2] + u * c[3])))
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        let i = self.segment(t)?;
        let c = self.coefficients(i);
        let u = t - self.x[i];
        Ok(c[1] + u * (2.0 * c[2] + u * 3.0 * c[3]))
    }

    fn segment_primitive(&self, i: usize, u: f64) -> f64 {
        let c = self.coefficients(i);
        u * (c[0] + u * (c[1] / 2.0 + u * (c[2] / 3.0 + u * c[3] / 4.0)))
    }

    /// Exact integral of the interpolant over `[a, b]` (both inside the table).
    pub fn integral(&self, a: f64, b: f64) -> Result<f64> {
        if b < a {
            return Ok(-self.integral(b, a)?);
        }
        let ia = self.segment(a)?;
        let ib = self.segment(b)?;
        if ia == ib {
            let x0 = self.x[ia];
            return Ok(self.segment_primitive(ia, b - x0) - self.segment_primitive(ia, a - x0));
        }
        let mut total = self.segment_primitive(ia, self.x[ia + 1] - self.x[ia])
            - self.segment_primitive(ia, a - self.x[ia]);
        for i in ia + 1..ib {
            total += self.segment_primitive(i, self.x[i + 1] - self.x[i]);
        }
        total += self.segment_primitive(ib, b - self.x[ib]);
        Ok(total)
    }
}

/// Parses a two-column CSV with a header row into strictly increasing
/// `(x, y)` samples. `header` lists the accepted column names.
pub fn parse_two_column_csv(text: &str, header: (&str, &str)) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head = lines
        .next()
        .ok_or_else(|| Error::Parse("empty table".into()))?;
    let cols: Vec<&str> = head.split(',').map(str::trim).collect();
    if cols != [header.0, header.1] {
        return Err(Error::Parse(format!(
            "expected header \"{},{}\", found \"{}\"",
            header.0, header.1, head
        )));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(Error::Parse(format!("row {}: expected 2 fields", row + 1)));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {}: {e}", row + 1)))
        };
        xs.push(parse(fields[0])?);
        ys.push(parse(fields[1])?);
    }
    if xs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Parse(format!("column {} must be strictly increasing", header.0)));
    }
    Ok((xs, ys))
}

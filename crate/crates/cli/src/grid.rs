use std::fmt;
use std::str::FromStr;

/// Uniform grid written `start:stop:points`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.stop
                } else {
                    self.start + step * i as f64
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected start:stop:points, got `{s}`"));
        };
        let (start, stop) = (num(a)?, num(b)?);
        let points: usize = n.trim().parse().map_err(|e| format!("`{n}`: {e}"))?;
        if points < 2 {
            return Err("a grid needs at least 2 points".into());
        }
        if !(start.is_finite() && stop.is_finite() && stop > start) {
            return Err(format!("need finite start < stop, got {start}:{stop}"));
        }
        Ok(Grid { start, stop, points })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)
    }
}

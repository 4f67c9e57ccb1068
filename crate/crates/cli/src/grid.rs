//! Sweep axes, written `name=start:end:count[:log]` and joined with commas.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub start: f64,
    pub end: f64,
    pub count: usize,
    pub log: bool,
}

impl Axis {
    pub fn linear(start: f64, end: f64, count: usize) -> Self {
        Self {
            start,
            end,
            count,
            log: false,
        }
    }

    pub fn log(start: f64, end: f64, count: usize) -> Self {
        Self {
            start,
            end,
            count,
            log: true,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.count < 2 {
            return Err(format!("axis needs at least 2 points, got {}", self.count));
        }
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err("axis range must be finite".into());
        }
        if self.log && (self.start <= 0.0 || self.end <= 0.0) {
            return Err("log axis needs a positive range".into());
        }
        Ok(())
    }

    /// Grid points; the first and last equal `start` and `end` exactly.
    pub fn points(&self) -> Vec<f64> {
        let last = self.count - 1;
        let (a, b) = if self.log {
            (self.start.ln(), self.end.ln())
        } else {
            (self.start, self.end)
        };
        (0..self.count)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == last {
                    return self.end;
                }
                let v = a + (b - a) * i as f64 / last as f64;
                if self.log {
                    v.exp()
                } else {
                    v
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let log = match parts.len() {
            3 => false,
            4 if parts[3].eq_ignore_ascii_case("log") => true,
            4 if parts[3].eq_ignore_ascii_case("lin") => false,
            _ => return Err(format!("expected start:end:count[:log], got `{s}`")),
        };
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("bad number `{t}` in `{s}`"));
        let count = parts[2]
            .parse::<usize>()
            .map_err(|_| format!("bad point count `{}` in `{s}`", parts[2]))?;
        let axis = Axis {
            start: num(parts[0])?,
            end: num(parts[1])?,
            count,
            log,
        };
        axis.validate()?;
        Ok(axis)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.end, self.count)?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridSpec {
    axes: BTreeMap<String, Axis>,
}

impl GridSpec {
    pub fn axis(&self, name: &str) -> Option<&Axis> {
        self.axes.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.axes.keys().map(String::as_str)
    }

    pub fn insert(&mut self, name: &str, axis: Axis) {
        self.axes.insert(name.to_owned(), axis);
    }

    pub fn is_empty(&self) -> bool {
        self.axes.is_empty()
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut spec = GridSpec::default();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (name, axis) = item
                .split_once('=')
                .ok_or_else(|| format!("expected name=start:end:count, got `{item}`"))?;
            let name = name.trim().to_ascii_lowercase();
            if spec.axes.contains_key(&name) {
                return Err(format!("axis `{name}` given twice"));
            }
            spec.axes.insert(name, axis.parse()?);
        }
        if spec.is_empty() {
            return Err("empty grid spec".into());
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_linear_and_log_axes() {
        let g: GridSpec = "x=-6:6:241, delta=0.01:1.5:30:log".parse().unwrap();
        assert_eq!(g.axis("x"), Some(&Axis::linear(-6.0, 6.0, 241)));
        assert_eq!(g.axis("delta"), Some(&Axis::log(0.01, 1.5, 30)));
        assert_eq!(g.names().collect::<Vec<_>>(), ["delta", "x"]);
    }

    #[test]
    fn endpoints_are_exact() {
        let pts = Axis::log(0.01, 1.5, 30).points();
        assert_eq!(pts.len(), 30);
        assert_eq!(pts[0], 0.01);
        assert_eq!(pts[29], 1.5);
        assert!(pts.windows(2).all(|w| w[1] > w[0]));
        let ratio = pts[1] / pts[0];
        assert!((pts[15] / pts[14] - ratio).abs() < 1e-12);

        let lin = Axis::linear(-4.0, 4.0, 161).points();
        assert_eq!(lin[80], 0.0);
        assert_eq!(lin[160], 4.0);
    }

    #[test]
    fn rejects_bad_specs() {
        for bad in [
            "",
            "x",
            "x=0:1",
            "x=0:1:1",
            "x=0:1:two",
            "x=0:inf:5",
            "x=0:1:5:log",
            "x=0:1:5:cubic",
            "x=0:1:5,x=0:2:5",
        ] {
            assert!(bad.parse::<GridSpec>().is_err(), "{bad}");
        }
    }

    #[test]
    fn display_round_trips() {
        let a = Axis::log(0.01, 1.5, 30);
        assert_eq!(a.to_string().parse::<Axis>().unwrap(), a);
    }
}

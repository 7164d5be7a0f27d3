//! File formats and flag values.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use packcell::{Disc, Packing, Point, Window};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscEntry {
    pub x: f64,
    pub y: f64,
    pub r: f64,
}

/// `{"discs": [{"x", "y", "r"}, ...], "window": {...}}`, window optional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PackingFile {
    pub discs: Vec<DiscEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
}

impl PackingFile {
    pub fn from_packing(packing: &Packing, window: Option<Window>) -> Self {
        PackingFile {
            discs: packing
                .discs()
                .iter()
                .map(|d| DiscEntry {
                    x: d.center.x,
                    y: d.center.y,
                    r: d.radius,
                })
                .collect(),
            window,
        }
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn packing(&self) -> Result<Packing, CliError> {
        let discs = self
            .discs
            .iter()
            .map(|d| Disc::new(Point::new(d.x, d.y), d.r))
            .collect::<packcell::Result<Vec<_>>>()
            .map_err(|e| CliError::Input(e.to_string()))?;
        Packing::new(discs).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn window(&self) -> Result<Option<Window>, CliError> {
        self.window
            .map(|w| w.checked().map_err(|e| CliError::Input(e.to_string())))
            .transpose()
    }
}

#[derive(Debug, Deserialize)]
struct CsvPoint {
    x: f64,
    y: f64,
}

/// CSV with header `x,y`.
pub fn read_points(path: &Path) -> Result<Vec<Point>, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let headers = reader.headers().map_err(|e| CliError::Input(e.to_string()))?.clone();
    if headers.iter().map(str::trim).collect::<Vec<_>>() != ["x", "y"] {
        return Err(CliError::Input(format!("{}: expected header `x,y`", path.display())));
    }
    reader
        .deserialize::<CsvPoint>()
        .map(|row| {
            let row = row.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            Ok(Point::new(row.x, row.y))
        })
        .collect()
}

/// `rect:xmin,ymin,xmax,ymax` or `disc:cx,cy,r`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindowArg(pub Window);

impl FromStr for WindowArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = s.split_once(':').ok_or("expected `rect:xmin,ymin,xmax,ymax` or `disc:cx,cy,r`")?;
        let values = parse_list::<f64>(rest)?;
        let window = match (kind, values.as_slice()) {
            ("rect", &[xmin, ymin, xmax, ymax]) => Window::Rect { xmin, ymin, xmax, ymax },
            ("disc", &[cx, cy, r]) => Window::Disc { cx, cy, r },
            ("rect", _) => return Err("rect takes four numbers".into()),
            ("disc", _) => return Err("disc takes three numbers".into()),
            _ => return Err(format!("unknown window kind `{kind}`")),
        };
        window.checked().map(WindowArg).map_err(|e| e.to_string())
    }
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>, String>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|v| v.trim().parse::<T>().map_err(|e| format!("`{}`: {e}", v.trim())))
        .collect()
}

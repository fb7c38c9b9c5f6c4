//! Plain-text contour files: one `x,y` pair per line, closing edge implied.
//! Blank lines and lines starting with `#` are ignored.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::geometry::Point;

pub fn parse_points(text: &str) -> Result<Vec<Point>> {
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse = |s: Option<&str>| -> Result<f64> {
            let s = s.ok_or_else(|| Error::Parse {
                line: i + 1,
                msg: "expected `x,y`".into(),
            })?;
            s.trim().parse::<f64>().map_err(|e| Error::Parse {
                line: i + 1,
                msg: format!("`{}`: {e}", s.trim()),
            })
        };
        let mut parts = line.split(',');
        let x = parse(parts.next())?;
        let y = parse(parts.next())?;
        if parts.next().is_some() {
            return Err(Error::Parse {
                line: i + 1,
                msg: "more than two fields".into(),
            });
        }
        points.push(Point::new(x, y));
    }
    Ok(points)
}

pub fn read_points<R: BufRead>(mut reader: R) -> std::io::Result<Result<Vec<Point>>> {
    let mut text = String::new();
    reader.read_to_string(&mut text)?;
    Ok(parse_points(&text))
}

/// Write points with the shortest round-trip float representation.
pub fn write_points<W: Write>(mut w: W, points: &[Point]) -> std::io::Result<()> {
    for p in points {
        writeln!(w, "{},{}", p.re, p.im)?;
    }
    Ok(())
}

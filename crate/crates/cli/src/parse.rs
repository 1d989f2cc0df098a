//! Parsers for the textual flag values: domains, points and number lists.

use std::path::Path;

use cassini::{Domain, Point};

/// Parse `x,y[,...]`.
pub fn point(s: &str) -> Result<Point, String> {
    let coords = numbers(s)?;
    Point::new(coords).map_err(|e| e.to_string())
}

/// Parse a comma-separated list of reals.
pub fn numbers(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{t}' is not a number"))
        })
        .collect()
}

/// Parse a domain spec. `dim` applies to the unit ball and the half-space.
///
/// `sampled:<file>` reads `x,y` rows; a header row is skipped, and the curve
/// is closed when its last row repeats the first.
pub fn domain(s: &str, dim: usize) -> Result<Domain, String> {
    let (kind, arg) = match s.split_once(':') {
        Some((k, a)) => (k, Some(a)),
        None => (s, None),
    };
    let need = |what: &str| arg.ok_or_else(|| format!("domain '{kind}' needs ':{what}'"));
    let d = match kind {
        "punctured-space" | "punctured-plane" => match arg {
            Some(a) => Domain::punctured_space(point(a)?),
            None => Domain::punctured_space(Point::origin(dim)),
        },
        "unit-ball" => Domain::unit_ball(dim).map_err(|e| e.to_string())?,
        "punctured-ball" => {
            Domain::punctured_unit_ball(point(need("ax,ay")?)?).map_err(|e| e.to_string())?
        }
        "half-space" => Domain::half_space(dim).map_err(|e| e.to_string())?,
        "sampled" => sampled(Path::new(need("<csvfile>")?))?,
        other => return Err(format!("unknown domain '{other}'")),
    };
    Ok(d)
}

fn sampled(path: &Path) -> Result<Domain, String> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut pts = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| format!("{}: {e}", path.display()))?;
        let vals: Result<Vec<f64>, _> = rec.iter().take(2).map(str::parse::<f64>).collect();
        match vals {
            Ok(v) if v.len() == 2 => pts.push(Point::xy(v[0], v[1])),
            _ if i == 0 => continue,
            _ => return Err(format!("{}: bad row {}", path.display(), i + 1)),
        }
    }
    let closed = pts.len() > 3 && pts.first() == pts.last();
    if closed {
        pts.pop();
    }
    Domain::sampled(pts, closed).map_err(|e| e.to_string())
}

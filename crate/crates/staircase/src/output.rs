//! Report envelopes and file writers. Every write goes to a temporary file in
//! the target directory and is renamed into place.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use staircase_core::symbols::Bitmap;
use staircase_core::whitney::TileRect;

use crate::config::Loaded;
use crate::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Envelope<'a, T: Serialize> {
    pub command: &'a str,
    pub version: &'a str,
    pub config_sha256: &'a str,
    pub seed: u64,
    pub report: T,
}

/// Collects outputs of one subcommand and writes them in order.
#[derive(Debug)]
pub struct Sink {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

impl Sink {
    pub fn new(dir: PathBuf) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir).map_err(|e| io(&dir, e))?;
        Ok(Self { dir, written: Vec::new() })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn bytes(&mut self, name: &str, data: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.dir.join(name);
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(|e| io(&self.dir, e))?;
        tmp.write_all(data).map_err(|e| io(&path, e))?;
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            // temporary files are created private
            tmp.as_file().set_permissions(std::fs::Permissions::from_mode(0o644)).map_err(|e| io(&path, e))?;
        }
        tmp.as_file().sync_all().map_err(|e| io(&path, e))?;
        tmp.persist(&path).map_err(|e| io(&path, e.error))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn json<T: Serialize>(&mut self, name: &str, command: &str, run: &Loaded, report: T) -> Result<PathBuf, CliError> {
        let env = Envelope { command, version: VERSION, config_sha256: &run.hash, seed: run.seed, report };
        let mut text = serde_json::to_string_pretty(&env).map_err(|e| CliError::Io(e.to_string()))?;
        text.push('\n');
        self.bytes(name, text.as_bytes())
    }

    /// CSV with a leading comment line carrying version and config hash.
    pub fn csv<R: Serialize>(&mut self, name: &str, run: &Loaded, rows: &[R]) -> Result<PathBuf, CliError> {
        let mut buf = format!("# staircase {VERSION} config_sha256={}\n", run.hash).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            for r in rows {
                w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
            }
            w.flush().map_err(|e| CliError::Io(e.to_string()))?;
        }
        self.bytes(name, &buf)
    }
}

/// Plain PGM, rows top-down so that `η` increases upwards.
pub fn pgm(bm: &Bitmap, run: &Loaded) -> Vec<u8> {
    let mut s = format!("P2\n# staircase {VERSION} config_sha256={}\n{} {}\n255\n", run.hash, bm.nx, bm.ny);
    for r in (0..bm.ny).rev() {
        let row: Vec<String> = (0..bm.nx).map(|c| ((bm.get(r, c).clamp(0.0, 1.0) * 255.0).round() as u8).to_string()).collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s.into_bytes()
}

#[derive(Debug, Serialize, serde::Deserialize)]
pub struct ComplexRow {
    pub re: f64,
    pub im: f64,
}

pub fn read_function_csv(path: &Path) -> Result<Vec<Complex64>, CliError> {
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io(path, e))?;
    rd.deserialize::<ComplexRow>()
        .map(|r| {
            r.map(|r| Complex64::new(r.re, r.im)).map_err(|e| match e.kind() {
                csv::ErrorKind::Io(_) => io(path, &e),
                _ => CliError::Config(format!("{}: {e}", path.display())),
            })
        })
        .collect()
}

pub fn function_rows(samples: &[Complex64]) -> Vec<ComplexRow> {
    samples.iter().map(|z| ComplexRow { re: z.re, im: z.im }).collect()
}

/// Rectangles and the polygon in the frequency plane, `η` pointing up.
pub fn svg(rects: &[TileRect], polygon: &[(f64, f64)], run: &Loaded) -> Vec<u8> {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in polygon.iter().chain(rects.iter().flat_map(|r| r.corners().to_vec()).collect::<Vec<_>>().iter()) {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let (w, h) = (800.0, 800.0 * ((y1 - y0) / (x1 - x0)).clamp(0.2, 5.0));
    let px = |x: f64| (x - x0) / (x1 - x0) * w;
    let py = |y: f64| h - (y - y0) / (y1 - y0) * h;
    let mut s = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w:.0}\" height=\"{h:.0}\" viewBox=\"0 0 {w:.3} {h:.3}\">\n\
         <!-- staircase {VERSION} config_sha256={} -->\n",
        run.hash
    );
    for r in rects {
        s.push_str(&format!(
            "<rect x=\"{:.3}\" y=\"{:.3}\" width=\"{:.3}\" height=\"{:.3}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"0.5\"/>\n",
            px(r.xi.0),
            py(r.eta.1),
            px(r.xi.1) - px(r.xi.0),
            py(r.eta.0) - py(r.eta.1)
        ));
    }
    let pts: Vec<String> = polygon.iter().map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y))).collect();
    s.push_str(&format!("<polyline points=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1\"/>\n</svg>\n", pts.join(" ")));
    s.into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;
    use staircase_core::symbols::Rect;

    fn run() -> Loaded {
        crate::config::parse(b"seed = 1\n[curve]\nfamily = \"hyperboloid\"\n[sequence]\nJ = 4\n", Path::new("."), None).unwrap()
    }

    #[test]
    fn pgm_rows_run_top_down() {
        let bm = Bitmap {
            nx: 2,
            ny: 2,
            window: Rect { xi_lo: 0.0, xi_hi: 1.0, eta_lo: 0.0, eta_hi: 1.0 },
            values: vec![1.0, 0.0, 0.0, 0.0],
        };
        let text = String::from_utf8(pgm(&bm, &run())).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "P2");
        assert_eq!(lines[2], "2 2");
        assert_eq!(lines[4], "0 0");
        assert_eq!(lines[5], "255 0");
    }

    #[test]
    fn function_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let mut sink = Sink::new(dir.path().to_path_buf()).unwrap();
        let z = vec![Complex64::new(1.5, -0.25), Complex64::new(0.0, 3.0)];
        let p = sink.csv("f.csv", &run(), &function_rows(&z)).unwrap();
        assert_eq!(read_function_csv(&p).unwrap(), z);
        assert_eq!(sink.written().len(), 1);
        // no temporary files left behind
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn malformed_function_file_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("bad.csv");
        std::fs::write(&p, "re,im\n1.0,x\n").unwrap();
        assert!(matches!(read_function_csv(&p), Err(CliError::Config(_))));
        assert!(matches!(read_function_csv(&dir.path().join("missing.csv")), Err(CliError::Io(_))));
    }
}

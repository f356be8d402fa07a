use std::fs;
use std::path::{Path, PathBuf};

use denjoy::density::MetricKind;
use denjoy::io::{fmt17, to_json_string, DomainSpec};
use denjoy::solver::SolverConfig;
use denjoy::GapDomain;
use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST: &str = "manifest.json";

/// A command failure: exit code, error name and message.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub name: String,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, e: &denjoy::Error) -> Failure {
        Failure {
            code,
            name: e.name().to_string(),
            message: e.to_string(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Failure {
        Failure {
            code: 3,
            name: "Io".into(),
            message: format!("{}: {e}", path.display()),
        }
    }

    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            name: "InvalidParameter".into(),
            message: message.into(),
        }
    }
}

pub type CmdResult<T> = Result<T, Failure>;

pub struct Loaded {
    pub domain: GapDomain,
    pub sha256: String,
}

pub fn load(path: &Path, truncate: Option<usize>) -> CmdResult<Loaded> {
    let bytes = fs::read(path).map_err(|e| Failure::io(path, e))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure::new(2, &denjoy::Error::Spec("spec is not UTF-8".into())))?;
    let domain = DomainSpec::parse(&text)
        .and_then(|s| s.to_domain(truncate))
        .map_err(|e| Failure::new(2, &e))?;
    Ok(Loaded {
        domain,
        sha256: hex(&Sha256::digest(&bytes)),
    })
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Everything that determines a run's output.
#[derive(Serialize)]
pub struct Manifest {
    pub command: String,
    pub spec: String,
    pub spec_sha256: String,
    pub metric: MetricKind,
    pub solver: SolverConfig,
    pub output_dir: String,
    pub tool_version: String,
    pub arguments: serde_json::Value,
}

/// Output directory bound to a written manifest.
pub struct Outputs {
    dir: PathBuf,
    manifest_sha256: String,
}

#[derive(Serialize)]
struct Referenced<'a, T: Serialize> {
    manifest: &'a str,
    manifest_sha256: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

impl Outputs {
    pub fn create(dir: &Path, manifest: &Manifest) -> CmdResult<Outputs> {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
        let text = to_json_string(manifest);
        let out = Outputs {
            dir: dir.to_path_buf(),
            manifest_sha256: hex(&Sha256::digest(text.as_bytes())),
        };
        out.write(MANIFEST, text.as_bytes())?;
        Ok(out)
    }

    fn write(&self, name: &str, bytes: &[u8]) -> CmdResult<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| Failure::io(&path, e))
    }

    /// One-line reference to the manifest, for comments in text formats.
    pub fn reference(&self) -> String {
        format!("manifest: {MANIFEST} sha256={}", self.manifest_sha256)
    }

    pub fn json<T: Serialize>(&self, name: &str, body: &T) -> CmdResult<String> {
        let text = to_json_string(&Referenced {
            manifest: MANIFEST,
            manifest_sha256: &self.manifest_sha256,
            body,
        });
        self.write(name, text.as_bytes())?;
        Ok(text)
    }

    /// CSV with a leading `#` comment naming the manifest.
    pub fn csv(&self, name: &str, header: &[&str], rows: &[Vec<String>]) -> CmdResult<()> {
        let mut buf = format!("# {}\n", self.reference()).into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            let fail = |e: csv::Error| Failure::usage(e.to_string());
            w.write_record(header).map_err(fail)?;
            for r in rows {
                w.write_record(r).map_err(fail)?;
            }
            w.flush().map_err(|e| Failure::io(&self.dir.join(name), e))?;
        }
        self.write(name, &buf)
    }

    pub fn text(&self, name: &str, body: &str) -> CmdResult<()> {
        self.write(name, body.as_bytes())
    }
}

/// Cell text for an optional number.
pub fn opt17(x: Option<f64>) -> String {
    x.map(fmt17).unwrap_or_default()
}

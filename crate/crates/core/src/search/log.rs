use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Hit, SearchParams};

/// Append-only JSON-lines hit log.
#[derive(Debug, Clone)]
pub struct HitLog {
    path: PathBuf,
}

impl HitLog {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        HitLog { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn append(&self, hit: &Hit) -> io::Result<()> {
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let line = serde_json::to_string(hit).map_err(io::Error::other)?;
        writeln!(f, "{line}")?;
        f.sync_data()
    }

    /// Hits recorded so far; a missing file is an empty log.
    pub fn read(&self) -> io::Result<Vec<Hit>> {
        read_hits(&self.path)
    }
}

pub fn read_hits(path: &Path) -> io::Result<Vec<Hit>> {
    let f = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e),
    };
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        // a torn final line from a crash is skipped
        if let Ok(hit) = serde_json::from_str::<Hit>(&line) {
            out.push(hit);
        }
    }
    Ok(out)
}

/// Where to pick up a search: `{"params":{…},"next_m":…,"next_D":…}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResumeState {
    pub params: SearchParams,
    pub next_m: u64,
    #[serde(rename = "next_D")]
    pub next_d: u64,
}

impl ResumeState {
    pub fn load(path: &Path) -> io::Result<Option<Self>> {
        match fs::read_to_string(path) {
            Ok(s) => serde_json::from_str(&s).map(Some).map_err(io::Error::other),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// Writes through a temporary file and rename, so readers never see a
    /// partial state.
    pub fn save(&self, path: &Path) -> io::Result<()> {
        let tmp = path.with_extension("tmp");
        {
            let mut f = File::create(&tmp)?;
            serde_json::to_writer(&mut f, self).map_err(io::Error::other)?;
            f.write_all(b"\n")?;
            f.sync_data()?;
        }
        fs::rename(tmp, path)
    }
}

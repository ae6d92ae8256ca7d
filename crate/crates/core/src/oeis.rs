//! OEIS b-files: parsing, a write-through cache, and cross-checks against
//! computed sequences.
//!
//! A b-file has optional `#` comment lines, blank lines, and data lines
//! `index value`. Fixtures are read from a local directory and never touch
//! the network; network loads go through the cache first.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_traits::Num;

use crate::bigdigits::{digit_sum, nonzero_count};
use crate::bounds::{factorial, lcm_upto};
use crate::{Caps, Natural};

/// Environment variable overriding the cache directory.
pub const CACHE_ENV: &str = "DIGITSUM_CACHE_DIR";
/// Default URL template; `{id}` is the full id and `{num}` its six digits.
pub const DEFAULT_URL_TEMPLATE: &str = "https://oeis.org/{id}/b{num}.txt";

#[derive(Debug, thiserror::Error)]
pub enum OeisError {
    #[error("invalid sequence id {0:?}: expected 'A' followed by six digits")]
    InvalidId(String),
    #[error("{id} line {line}: {message}")]
    Parse {
        id: String,
        line: usize,
        message: String,
    },
    #[error("fetching {url} failed ({detail}); cache miss at {}", cache.display())]
    Transport {
        url: String,
        detail: String,
        cache: PathBuf,
    },
    #[error("fixture {} not found", .0.display())]
    MissingFixture(PathBuf),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("b-file does not cover indices {missing:?}")]
    Coverage { missing: Vec<u64> },
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error(transparent)]
    Compute(#[from] crate::Error),
}

impl OeisError {
    pub fn kind(&self) -> &'static str {
        match self {
            OeisError::InvalidId(_) => "invalid-id",
            OeisError::Parse { .. } => "parse",
            OeisError::Transport { .. } => "transport",
            OeisError::MissingFixture(_) => "missing-fixture",
            OeisError::Io { .. } => "io",
            OeisError::Coverage { .. } => "coverage",
            OeisError::UnknownGenerator(_) => "unknown-generator",
            OeisError::Compute(e) => e.kind(),
        }
    }
}

pub type Result<T, E = OeisError> = std::result::Result<T, E>;

/// An OEIS A-number such as `A001370`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SequenceId(String);

impl SequenceId {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The six digits after the `A`.
    pub fn number(&self) -> &str {
        &self.0[1..]
    }

    /// File name used by both fixtures and the cache: `bNNNNNN.txt`.
    pub fn file_name(&self) -> String {
        format!("b{}.txt", self.number())
    }
}

impl FromStr for SequenceId {
    type Err = OeisError;

    fn from_str(s: &str) -> Result<Self> {
        let ok = s.len() == 7 && s.starts_with('A') && s[1..].bytes().all(|c| c.is_ascii_digit());
        if ok {
            Ok(SequenceId(s.to_string()))
        } else {
            Err(OeisError::InvalidId(s.to_string()))
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFile {
    pub id: SequenceId,
    /// `(index, value)` with strictly increasing indices.
    pub entries: Vec<(u64, Natural)>,
}

impl BFile {
    pub fn parse(id: SequenceId, text: &str) -> Result<Self> {
        let mut entries: Vec<(u64, Natural)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| OeisError::Parse {
                id: id.to_string(),
                line: lineno + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [index, value] = fields[..] else {
                return Err(err(format!("expected 'index value', found {line:?}")));
            };
            let index: u64 = index
                .parse()
                .map_err(|_| err(format!("bad index {index:?}")))?;
            let value = Natural::from_str_radix(value, 10)
                .map_err(|_| err(format!("bad value {value:?}")))?;
            if let Some(&(prev, _)) = entries.last() {
                if index <= prev {
                    return Err(err(format!("index {index} does not follow {prev}")));
                }
            }
            entries.push((index, value));
        }
        Ok(BFile { id, entries })
    }

    pub fn get(&self, index: u64) -> Option<&Natural> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|pos| &self.entries[pos].1)
    }
}

/// Write-through cache of raw b-file text, keyed by sequence id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `$DIGITSUM_CACHE_DIR`, else `$XDG_CACHE_HOME/digitsum/oeis`, else
    /// `~/.cache/digitsum/oeis`.
    pub fn from_env() -> Self {
        if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|d| !d.is_empty()) {
            return Cache::new(dir);
        }
        let root = std::env::var_os("XDG_CACHE_HOME")
            .filter(|d| !d.is_empty())
            .map(PathBuf::from)
            .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
            .unwrap_or_else(std::env::temp_dir);
        Cache::new(root.join("digitsum").join("oeis"))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, id: &SequenceId) -> PathBuf {
        self.dir.join(format!("{id}.txt"))
    }

    pub fn read(&self, id: &SequenceId) -> Result<Option<String>> {
        let path = self.path(id);
        match fs::read_to_string(&path) {
            Ok(text) => Ok(Some(text)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(None),
            Err(source) => Err(OeisError::Io { path, source }),
        }
    }

    /// Replaces the cached file atomically.
    pub fn write(&self, id: &SequenceId, text: &str) -> Result<()> {
        let io_err = |path: &Path| {
            let path = path.to_path_buf();
            move |source| OeisError::Io { path, source }
        };
        fs::create_dir_all(&self.dir).map_err(io_err(&self.dir))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir).map_err(io_err(&self.dir))?;
        tmp.write_all(text.as_bytes()).map_err(io_err(tmp.path()))?;
        let path = self.path(id);
        tmp.persist(&path).map_err(|e| OeisError::Io {
            path,
            source: e.error,
        })?;
        Ok(())
    }
}

/// Where [`load_bfile`] reads from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    /// A directory of `bNNNNNN.txt` files.
    Fixtures(PathBuf),
    Network {
        cache: Cache,
        url_template: String,
    },
}

impl Source {
    /// The fixtures bundled with this crate.
    pub fn bundled() -> Self {
        Source::Fixtures(
            Path::new(env!("CARGO_MANIFEST_DIR"))
                .join("fixtures")
                .join("oeis"),
        )
    }

    pub fn network(cache: Cache) -> Self {
        Source::Network {
            cache,
            url_template: DEFAULT_URL_TEMPLATE.to_string(),
        }
    }
}

pub fn url_for(template: &str, id: &SequenceId) -> String {
    template
        .replace("{id}", id.as_str())
        .replace("{num}", id.number())
}

fn fetch(url: &str) -> std::result::Result<String, String> {
    let mut response = ureq::get(url).call().map_err(|e| e.to_string())?;
    response
        .body_mut()
        .read_to_string()
        .map_err(|e| e.to_string())
}

pub fn load_bfile(id: &SequenceId, source: &Source) -> Result<BFile> {
    let text = match source {
        Source::Fixtures(dir) => {
            let path = dir.join(id.file_name());
            match fs::read_to_string(&path) {
                Ok(text) => text,
                Err(e) if e.kind() == io::ErrorKind::NotFound => {
                    return Err(OeisError::MissingFixture(path))
                }
                Err(source) => return Err(OeisError::Io { path, source }),
            }
        }
        Source::Network {
            cache,
            url_template,
        } => match cache.read(id)? {
            Some(text) => text,
            None => {
                let url = url_for(url_template, id);
                let text = fetch(&url).map_err(|detail| OeisError::Transport {
                    url: url.clone(),
                    detail,
                    cache: cache.path(id),
                })?;
                cache.write(id, &text)?;
                text
            }
        },
    };
    BFile::parse(id.clone(), &text)
}

/// A computed sequence to compare against a b-file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// `a^n`.
    Pow(u64),
    /// `s_b(a^n)`.
    DigitSumPow {
        a: u64,
        b: u32,
    },
    /// `c_b(a^n)`.
    NonzeroPow {
        a: u64,
        b: u32,
    },
    Factorial,
    Lcm,
    /// `s_b(n!)`.
    DigitSumFactorial(u32),
    /// `s_b(lcm(1..n))`.
    DigitSumLcm(u32),
}

impl Generator {
    pub fn value(&self, n: u64, caps: &Caps) -> crate::Result<Natural> {
        Ok(match *self {
            Generator::Pow(a) => crate::power(a, n, caps)?,
            Generator::DigitSumPow { a, b } => digit_sum(&crate::power(a, n, caps)?, b)?.into(),
            Generator::NonzeroPow { a, b } => nonzero_count(&crate::power(a, n, caps)?, b)?.into(),
            Generator::Factorial => factorial(n, caps)?,
            Generator::Lcm => lcm_upto(n, caps)?,
            Generator::DigitSumFactorial(b) => digit_sum(&factorial(n, caps)?, b)?.into(),
            Generator::DigitSumLcm(b) => digit_sum(&lcm_upto(n, caps)?, b)?.into(),
        })
    }
}

impl FromStr for Generator {
    type Err = OeisError;

    /// `pow:A`, `digitsum-pow:A:B`, `nonzero-pow:A:B`, `factorial`, `lcm`,
    /// `digitsum-factorial:B`, `digitsum-lcm:B`.
    fn from_str(s: &str) -> Result<Self> {
        let unknown = || OeisError::UnknownGenerator(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<u64> {
            parts
                .get(i)
                .and_then(|p| p.parse().ok())
                .ok_or_else(unknown)
        };
        let base = |i: usize| -> Result<u32> {
            let b = num(i)?;
            u32::try_from(b)
                .ok()
                .filter(|&b| b >= 2)
                .ok_or_else(unknown)
        };
        let generator = match (parts[0], parts.len()) {
            ("pow", 2) => Generator::Pow(num(1)?),
            ("digitsum-pow", 3) => Generator::DigitSumPow {
                a: num(1)?,
                b: base(2)?,
            },
            ("nonzero-pow", 3) => Generator::NonzeroPow {
                a: num(1)?,
                b: base(2)?,
            },
            ("factorial", 1) => Generator::Factorial,
            ("lcm", 1) => Generator::Lcm,
            ("digitsum-factorial", 2) => Generator::DigitSumFactorial(base(1)?),
            ("digitsum-lcm", 2) => Generator::DigitSumLcm(base(1)?),
            _ => return Err(unknown()),
        };
        Ok(generator)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Pow(a) => write!(f, "pow:{a}"),
            Generator::DigitSumPow { a, b } => write!(f, "digitsum-pow:{a}:{b}"),
            Generator::NonzeroPow { a, b } => write!(f, "nonzero-pow:{a}:{b}"),
            Generator::Factorial => f.write_str("factorial"),
            Generator::Lcm => f.write_str("lcm"),
            Generator::DigitSumFactorial(b) => write!(f, "digitsum-factorial:{b}"),
            Generator::DigitSumLcm(b) => write!(f, "digitsum-lcm:{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckRow {
    pub index: u64,
    pub expected: Natural,
    pub computed: Natural,
}

impl CrosscheckRow {
    pub fn matches(&self) -> bool {
        self.expected == self.computed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub id: SequenceId,
    pub generator: Generator,
    pub rows: Vec<CrosscheckRow>,
}

impl CrosscheckReport {
    pub fn first_mismatch(&self) -> Option<u64> {
        self.rows.iter().find(|r| !r.matches()).map(|r| r.index)
    }

    pub fn passed(&self) -> bool {
        self.first_mismatch().is_none()
    }
}

/// Compares `bfile` with `generator` at every index of `range`.
pub fn crosscheck(
    bfile: &BFile,
    generator: Generator,
    range: std::ops::RangeInclusive<u64>,
    caps: &Caps,
) -> Result<CrosscheckReport> {
    let missing: Vec<u64> = range.clone().filter(|&i| bfile.get(i).is_none()).collect();
    if !missing.is_empty() {
        return Err(OeisError::Coverage { missing });
    }
    let rows = range
        .map(|index| {
            Ok(CrosscheckRow {
                index,
                expected: bfile.get(index).expect("coverage checked").clone(),
                computed: generator.value(index, caps)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(CrosscheckReport {
        id: bfile.id.clone(),
        generator,
        rows,
    })
}

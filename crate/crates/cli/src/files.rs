//! Directory listing, label tables and atomic file output.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use fetal_doppler::{ClassLabel, Problem};
use tempfile::NamedTempFile;

use crate::error::CliError;

/// Regular files in `dir` accepted by `keep`, as `(id, path)` in
/// lexicographic order of id. The id is the file stem.
pub fn list_inputs(
    dir: &Path,
    keep: impl Fn(&Path) -> bool,
) -> Result<Vec<(String, PathBuf)>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| CliError::io(dir, e))?;
        let path = entry.path();
        let file_type = entry.file_type().map_err(|e| CliError::io(&path, e))?;
        let is_file = file_type.is_file() || (file_type.is_symlink() && path.is_file());
        if is_file && keep(&path) {
            paths.push(path);
        }
    }
    let mut seen: HashMap<String, PathBuf> = HashMap::with_capacity(paths.len());
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .ok_or_else(|| {
                CliError::data(
                    "invalid_id",
                    format!("{}: file name is not UTF-8", path.display()),
                )
            })?
            .to_owned();
        if let Some(other) = seen.insert(id.clone(), path.clone()) {
            return Err(CliError::data(
                "duplicate_id",
                format!(
                    "`{id}` names both {} and {}",
                    other.display(),
                    path.display()
                ),
            ));
        }
        out.push((id, path));
    }
    out.sort();
    Ok(out)
}

pub fn has_extension(path: &Path, ext: &str) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case(ext))
}

/// Write `bytes` to a temporary file next to `path` and rename it into place,
/// so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// CSV bytes with LF line endings.
pub fn csv_bytes<I, R>(header: &[&str], rows: I) -> Vec<u8>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(header).expect("in-memory CSV");
    for row in rows {
        writer.write_record(row).expect("in-memory CSV");
    }
    writer.into_inner().expect("in-memory CSV")
}

/// Read an `id,label` table. Ids must be unique; labels must belong to
/// `problem` when one is given.
pub fn read_labels(
    path: &Path,
    problem: Option<Problem>,
) -> Result<BTreeMap<String, ClassLabel>, CliError> {
    let text = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let parse_err = |row: usize, msg: String| {
        CliError::data("parse", format!("{} row {row}: {msg}", path.display()))
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_slice());
    let mut records = reader.records();
    match records.next() {
        Some(Ok(h)) if h.iter().eq(["id", "label"]) => {}
        Some(Err(e)) => return Err(parse_err(1, e.to_string())),
        _ => return Err(parse_err(1, "expected header `id,label`".into())),
    }
    let mut labels = BTreeMap::new();
    for (i, record) in records.enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| parse_err(row, e.to_string()))?;
        if record.len() != 2 {
            return Err(parse_err(
                row,
                format!("expected 2 columns, got {}", record.len()),
            ));
        }
        let id = record[0].to_owned();
        let label: ClassLabel = record[1].parse().map_err(|e: String| parse_err(row, e))?;
        if let Some(problem) = problem {
            if !problem.accepts(label) {
                return Err(fetal_doppler::Error::InvalidLabel {
                    id,
                    label: label.to_string(),
                }
                .into());
            }
        }
        if labels.insert(id.clone(), label).is_some() {
            return Err(CliError::data(
                "duplicate_id",
                format!("{}: id `{id}` appears more than once", path.display()),
            ));
        }
    }
    Ok(labels)
}

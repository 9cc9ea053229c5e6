use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::CliError;

/// One rendered output file. The first document of a command is the primary
/// one: it goes to `--out` verbatim (or stdout), the rest get their own
/// extension next to it.
pub struct Document {
    pub extension: &'static str,
    pub body: String,
}

impl Document {
    pub fn csv(body: String) -> Self {
        Self {
            extension: "csv",
            body,
        }
    }

    pub fn json(value: &Value) -> Self {
        let mut body = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        body.push('\n');
        Self {
            extension: "json",
            body,
        }
    }
}

/// Writes to a temporary file in the target directory, then renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents)
        .map_err(|e| CliError::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

fn sidecar_path(primary: &Path) -> PathBuf {
    primary.with_extension("meta.json")
}

/// Emits the documents and, when writing to disk, a metadata sidecar holding
/// the timestamp and the resolved configuration.
pub fn emit(
    command: &str,
    out: Option<&Path>,
    provenance: Value,
    docs: Vec<Document>,
) -> Result<(), CliError> {
    let Some(primary) = out else {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        return lock
            .write_all(docs[0].body.as_bytes())
            .and_then(|_| lock.flush())
            .map_err(|e| CliError::io("<stdout>", e));
    };

    let mut written = Vec::with_capacity(docs.len());
    for (i, doc) in docs.iter().enumerate() {
        let path = if i == 0 {
            primary.to_path_buf()
        } else {
            primary.with_extension(doc.extension)
        };
        write_atomic(&path, doc.body.as_bytes())?;
        written.push(path);
    }
    let meta = json!({
        "command": command,
        "created": chrono::Utc::now().to_rfc3339(),
        "qei_version": env!("CARGO_PKG_VERSION"),
        "threads": rayon::current_num_threads(),
        "files": written.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        "config": provenance,
    });
    write_atomic(
        &sidecar_path(primary),
        Document::json(&meta).body.as_bytes(),
    )
}

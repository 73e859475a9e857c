use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use super::dataset::DatasetRecord;
use crate::logic::write_dimacs;

/// File name for a record id (path separators replaced).
pub fn dimacs_file_name(id: &str) -> String {
    let safe: String = id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.' | '=') { c } else { '_' })
        .collect();
    format!("{safe}.cnf")
}

/// Writes one `.cnf` file per record into `dir`, returning the paths.
pub fn export_dimacs(records: &[DatasetRecord], dir: &Path) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::with_capacity(records.len());
    for r in records {
        let f = r.formula().map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
        let comments = vec![
            format!("id {}", r.id),
            format!("generator {}", r.generator.id()),
            format!("seed {}", r.seed),
            format!("expected {}", r.ground_truth),
        ];
        let path = dir.join(dimacs_file_name(&r.id));
        fs::write(&path, write_dimacs(&f, &comments))?;
        paths.push(path);
    }
    Ok(paths)
}

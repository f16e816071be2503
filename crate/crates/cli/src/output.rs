//! Output files are written to a temporary file in the target directory and
//! renamed into place, so readers never observe a partial file.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use tempfile::NamedTempFile;

use crate::error::CliError;

pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn write<F>(&mut self, name: &str, body: F) -> Result<PathBuf, CliError>
    where
        F: FnOnce(&mut dyn Write) -> io::Result<()>,
    {
        let path = self.root.join(name);
        let io_err = |e| CliError::io(&path, e);
        let mut tmp = NamedTempFile::new_in(&self.root).map_err(io_err)?;
        {
            let mut w = BufWriter::new(tmp.as_file_mut());
            body(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)?;
        }
        #[cfg(unix)]
        {
            use std::os::unix::fs::PermissionsExt;
            tmp.as_file()
                .set_permissions(fs::Permissions::from_mode(0o644))
                .map_err(io_err)?;
        }
        tmp.persist(&path).map_err(|e| io_err(e.error))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::other)?;
            writeln!(w)
        })
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }
}

//! Sidecar file of completed cells.
//!
//! The checkpoint is a results CSV that only ever grows: each finished task
//! appends its rows under an exclusive file lock. A run killed mid-write can
//! leave a partial last line, which is cut off when the file is reopened.

use std::fs::{File, OpenOptions};
use std::io::{Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::error::{CliError, Result};
use crate::record::{csv_writer, read_records, write_records, write_row, ResultRecord};

pub struct Checkpoint {
    path: PathBuf,
    file: Mutex<File>,
}

impl Checkpoint {
    /// Opens or creates the checkpoint and returns the records already in
    /// it.
    pub fn open(path: &Path) -> Result<(Self, Vec<ResultRecord>)> {
        let io = |e| CliError::io(path, e);
        let mut file = OpenOptions::new()
            .read(true)
            .write(true)
            .create(true)
            .truncate(false)
            .open(path)
            .map_err(io)?;
        file.lock().map_err(io)?;
        let mut bytes = Vec::new();
        file.read_to_end(&mut bytes).map_err(io)?;
        let complete = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
        if complete < bytes.len() {
            file.set_len(complete as u64).map_err(io)?;
            bytes.truncate(complete);
        }
        let records = if bytes.is_empty() {
            let mut buf = Vec::new();
            write_records(&mut buf, &[]).map_err(|e| CliError::records(path, e.to_string()))?;
            file.write_all(&buf).map_err(io)?;
            Vec::new()
        } else {
            read_records(bytes.as_slice(), path)?
        };
        file.seek(SeekFrom::End(0)).map_err(io)?;
        file.unlock().map_err(io)?;
        Ok((
            Self {
                path: path.to_path_buf(),
                file: Mutex::new(file),
            },
            records,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Appends the rows of one finished task in a single write.
    pub fn append(&self, records: &[ResultRecord]) -> Result<()> {
        let io = |e| CliError::io(&self.path, e);
        let mut buf = Vec::new();
        {
            let mut w = csv_writer(&mut buf);
            for r in records {
                write_row(&mut w, r).map_err(|e| CliError::records(&self.path, e.to_string()))?;
            }
            w.flush().map_err(io)?;
        }
        let mut file = self.file.lock().unwrap_or_else(|p| p.into_inner());
        file.lock().map_err(io)?;
        let res = file
            .seek(SeekFrom::End(0))
            .and_then(|_| file.write_all(&buf))
            .and_then(|_| file.sync_data());
        file.unlock().map_err(io)?;
        res.map_err(io)
    }
}

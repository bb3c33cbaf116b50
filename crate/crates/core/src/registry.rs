//! Local file-based publication registry.
//!
//! Layout: `<root>/<first-2-chars-of-code>/<code>.trig`, one nanopub per
//! file. Publishing refuses protected nanopublications before anything is
//! written, verifies everything it stores, and re-verifies on every read.
//! Re-publishing identical content is a no-op.

use std::collections::HashSet;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use crate::nanopub::{resolve_index, Nanopub, NanopubError, NanopubSource, TrustyRef};
use crate::rdf::parse_trig;

/// Errors from registry operations.
#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("refusing to publish protected nanopub {0}")]
    ProtectedPublicationRefused(String),
    #[error("nanopub failed verification: {uri}: {reason}")]
    VerificationFailure { uri: String, reason: String },
    #[error("registry already holds different content under code {0}")]
    ConflictingContent(String),
    #[error("not found in registry: {0}")]
    NotFound(String),
    #[error("dataset incomplete; missing members: {0:?}")]
    IncompleteDataset(Vec<String>),
    #[error(transparent)]
    Nanopub(#[from] NanopubError),
    #[error("registry I/O: {0}")]
    Io(#[from] std::io::Error),
}

/// Receipt for a successful publication.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Receipt {
    pub uri: String,
    pub stored_path: PathBuf,
}

/// A publication registry rooted at a directory. Publishes serialize on a
/// per-registry lock; reads are lock-free.
#[derive(Debug)]
pub struct Registry {
    root: PathBuf,
    write_lock: Mutex<()>,
}

impl Registry {
    /// Opens (and creates if needed) a registry at `root`.
    pub fn open(root: impl Into<PathBuf>) -> Result<Registry, RegistryError> {
        let root = root.into();
        std::fs::create_dir_all(&root)?;
        Ok(Registry {
            root,
            write_lock: Mutex::new(()),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn path_for_code(&self, code: &str) -> PathBuf {
        self.root.join(&code[..2]).join(format!("{code}.trig"))
    }

    /// Publishes a public nanopub. Protected nanopubs are refused before any
    /// write; identical re-publication is a no-op.
    pub fn publish(&self, nanopub: &Nanopub) -> Result<Receipt, RegistryError> {
        if nanopub.is_protected() {
            return Err(RegistryError::ProtectedPublicationRefused(
                nanopub.uri().to_owned(),
            ));
        }
        let report = nanopub.verify();
        if !report.valid {
            return Err(RegistryError::VerificationFailure {
                uri: nanopub.uri().to_owned(),
                reason: report.reason.unwrap_or_default(),
            });
        }
        let code = nanopub
            .artifact_code()
            .expect("verified nanopub carries a code");
        let path = self.path_for_code(&code);

        let _guard = self.write_lock.lock().expect("registry lock poisoned");
        if path.exists() {
            let existing = read_nanopub_file(&path, nanopub.uri())?;
            if existing.dataset().quad_set_eq(nanopub.dataset()) {
                return Ok(Receipt {
                    uri: nanopub.uri().to_owned(),
                    stored_path: path,
                });
            }
            return Err(RegistryError::ConflictingContent(code));
        }
        std::fs::create_dir_all(path.parent().expect("registry layout"))?;
        let tmp = path.with_extension("tmp");
        {
            let mut file = std::fs::File::create(&tmp)?;
            file.write_all(nanopub.to_trig().as_bytes())?;
            file.sync_all()?;
        }
        std::fs::rename(&tmp, &path)?;
        Ok(Receipt {
            uri: nanopub.uri().to_owned(),
            stored_path: path,
        })
    }

    /// Fetches and re-verifies a nanopub by URI.
    pub fn fetch(&self, uri: &str) -> Result<Nanopub, RegistryError> {
        let trusty =
            TrustyRef::parse(uri).ok_or_else(|| RegistryError::NotFound(uri.to_owned()))?;
        let path = self.path_for_code(&trusty.artifact_code);
        if !path.exists() {
            return Err(RegistryError::NotFound(uri.to_owned()));
        }
        read_nanopub_file(&path, uri)
    }

    /// Resolves an index (following append links) and fetches every member.
    /// Any missing member fails the whole call.
    pub fn fetch_dataset(&self, index_uri: &str) -> Result<Vec<Nanopub>, RegistryError> {
        let members = resolve_index(index_uri, self)?;
        let mut fetched = Vec::with_capacity(members.len());
        let mut missing = Vec::new();
        for member in &members {
            match self.fetch(member) {
                Ok(nanopub) => fetched.push(nanopub),
                Err(RegistryError::NotFound(_)) => missing.push(member.clone()),
                Err(other) => return Err(other),
            }
        }
        if !missing.is_empty() {
            return Err(RegistryError::IncompleteDataset(missing));
        }
        Ok(fetched)
    }

    /// Verifies every stored file: content hash, structure, and the
    /// filename ↔ artifact-code correspondence.
    pub fn verify_all(&self) -> Result<usize, RegistryError> {
        let mut count = 0;
        for entry in walk_trig_files(&self.root)? {
            let stem = entry
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_owned();
            let text = std::fs::read_to_string(&entry)?;
            let dataset = parse_trig(&text).map_err(NanopubError::from)?;
            let nanopubs = Nanopub::from_dataset(&dataset)?;
            for nanopub in nanopubs {
                let report = nanopub.verify();
                if !report.valid {
                    return Err(RegistryError::VerificationFailure {
                        uri: nanopub.uri().to_owned(),
                        reason: report.reason.unwrap_or_default(),
                    });
                }
                if nanopub.artifact_code().as_deref() != Some(stem.as_str()) {
                    return Err(RegistryError::ConflictingContent(stem.clone()));
                }
                count += 1;
            }
        }
        Ok(count)
    }

    /// Artifact codes currently stored.
    pub fn published_codes(&self) -> Result<HashSet<String>, RegistryError> {
        let mut codes = HashSet::new();
        for entry in walk_trig_files(&self.root)? {
            if let Some(stem) = entry.file_stem().and_then(|s| s.to_str()) {
                codes.insert(stem.to_owned());
            }
        }
        Ok(codes)
    }
}

impl NanopubSource for Registry {
    fn get_nanopub(&self, uri: &str) -> Option<Nanopub> {
        self.fetch(uri).ok()
    }
}

fn read_nanopub_file(path: &Path, uri: &str) -> Result<Nanopub, RegistryError> {
    let text = std::fs::read_to_string(path)?;
    let dataset = parse_trig(&text).map_err(|e| RegistryError::VerificationFailure {
        uri: uri.to_owned(),
        reason: format!("unparseable file: {e}"),
    })?;
    let nanopubs = Nanopub::from_dataset(&dataset).map_err(|e| {
        RegistryError::VerificationFailure {
            uri: uri.to_owned(),
            reason: e.to_string(),
        }
    })?;
    let nanopub = nanopubs
        .into_iter()
        .find(|np| np.uri() == uri)
        .ok_or_else(|| RegistryError::NotFound(uri.to_owned()))?;
    let report = nanopub.verify();
    if !report.valid {
        return Err(RegistryError::VerificationFailure {
            uri: uri.to_owned(),
            reason: report.reason.unwrap_or_default(),
        });
    }
    Ok(nanopub)
}

fn walk_trig_files(root: &Path) -> Result<Vec<PathBuf>, std::io::Error> {
    let mut files = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in std::fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().and_then(|e| e.to_str()) == Some("trig") {
                files.push(path);
            }
        }
    }
    files.sort();
    Ok(files)
}

//! Plain-file template store: one template file per user under a root
//! directory, written atomically via temp-file-then-rename.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::minutiae::{MinutiaeTemplate, TemplateError};

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("user {0:?} is already enrolled (pass --overwrite to replace)")]
    UserExists(String),
    #[error("user {0:?} is not enrolled")]
    UnknownUser(String),
    #[error("invalid user id {0:?}: use 1-64 characters from [A-Za-z0-9_-]")]
    InvalidUserId(String),
    #[error(transparent)]
    Template(#[from] TemplateError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub struct TemplateStore {
    root: PathBuf,
}

impl TemplateStore {
    /// Open (creating if needed) a store rooted at `root`.
    pub fn open(root: impl AsRef<Path>) -> Result<Self, StoreError> {
        let root = root.as_ref().to_path_buf();
        std::fs::create_dir_all(&root)?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn template_path(&self, user_id: &str) -> Result<PathBuf, StoreError> {
        validate_user_id(user_id)?;
        Ok(self.root.join(format!("{user_id}.tpl")))
    }

    pub fn exists(&self, user_id: &str) -> Result<bool, StoreError> {
        Ok(self.template_path(user_id)?.exists())
    }

    pub fn save(&self, template: &MinutiaeTemplate, overwrite: bool) -> Result<(), StoreError> {
        let path = self.template_path(&template.user_id)?;
        if path.exists() && !overwrite {
            return Err(StoreError::UserExists(template.user_id.clone()));
        }
        let tmp = self.root.join(format!(".{}.tpl.tmp", template.user_id));
        std::fs::write(&tmp, template.serialize())?;
        std::fs::rename(&tmp, &path)?;
        Ok(())
    }

    pub fn load(&self, user_id: &str) -> Result<MinutiaeTemplate, StoreError> {
        let path = self.template_path(user_id)?;
        if !path.exists() {
            return Err(StoreError::UnknownUser(user_id.to_string()));
        }
        Ok(MinutiaeTemplate::load(path)?)
    }
}

fn validate_user_id(user_id: &str) -> Result<(), StoreError> {
    let ok = !user_id.is_empty()
        && user_id.len() <= 64
        && user_id.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-');
    if ok {
        Ok(())
    } else {
        Err(StoreError::InvalidUserId(user_id.to_string()))
    }
}

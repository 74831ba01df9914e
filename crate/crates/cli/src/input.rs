use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use wht_core::text::{parse_factors, parse_sequence, parse_sequences};
use wht_core::{AlgorithmSeq, FactorTuple};

use crate::Failure;

/// Where a command reads its text from.
pub struct Source {
    pub file: Option<PathBuf>,
    pub expr: Option<String>,
}

impl Source {
    fn label(&self) -> String {
        match (&self.expr, &self.file) {
            (Some(_), _) => "<expr>".into(),
            (None, Some(p)) if p != Path::new("-") => p.display().to_string(),
            _ => "<stdin>".into(),
        }
    }

    fn read(&self) -> Result<String, Failure> {
        if let Some(e) = &self.expr {
            return Ok(e.clone());
        }
        match &self.file {
            Some(p) if p != Path::new("-") => {
                fs::read_to_string(p).map_err(|e| Failure::usage(format!("{}: {e}", p.display())))
            }
            _ => {
                let mut s = String::new();
                io::stdin()
                    .read_to_string(&mut s)
                    .map_err(|e| Failure::usage(format!("<stdin>: {e}")))?;
                Ok(s)
            }
        }
    }

    fn located(&self, e: wht_core::Error) -> Failure {
        Failure::from_core(e).context(&self.label())
    }

    pub fn sequence(&self) -> Result<AlgorithmSeq, Failure> {
        parse_sequence(&self.read()?).map_err(|e| self.located(e))
    }

    pub fn sequences(&self) -> Result<Vec<AlgorithmSeq>, Failure> {
        let all = parse_sequences(&self.read()?).map_err(|e| self.located(e))?;
        if all.is_empty() {
            return Err(Failure::usage(format!("{}: no sequences", self.label())));
        }
        Ok(all)
    }

    pub fn factors(&self) -> Result<FactorTuple, Failure> {
        parse_factors(&self.read()?).map_err(|e| self.located(e))
    }
}

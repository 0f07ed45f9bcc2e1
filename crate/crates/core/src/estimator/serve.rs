use std::io::{BufRead, Write};

use super::exec::{WireRequest, WireResponse};
use super::{Backend, BatchRequest, SurrogateBackend};
use crate::catalog::Catalog;
use crate::error::{Error, Result};

/// Answer estimator requests with the built-in surrogate until `input` closes.
///
/// This is the server half of [`ExecBackend`](super::ExecBackend)'s line
/// protocol. Requests that cannot be served get an `error` response; a line
/// that is not a request at all aborts the loop.
pub fn serve(catalog: &Catalog, input: impl BufRead, mut output: impl Write) -> Result<()> {
    let io_err = |source| Error::Io {
        path: "<estimator stream>".into(),
        source,
    };
    for line in input.lines() {
        let line = line.map_err(io_err)?;
        if line.trim().is_empty() {
            continue;
        }
        let req: WireRequest = serde_json::from_str(&line)
            .map_err(|e| Error::invalid(format!("malformed estimator request: {e}")))?;
        let resp = match answer(catalog, &req) {
            Ok(ppa) => WireResponse {
                batch_id: req.batch_id,
                ppa: Some(ppa),
                error: None,
            },
            Err(e) => WireResponse {
                batch_id: req.batch_id,
                ppa: None,
                error: Some(e.to_string()),
            },
        };
        let mut text = serde_json::to_string(&resp).expect("response serializes");
        text.push('\n');
        output.write_all(text.as_bytes()).map_err(io_err)?;
        output.flush().map_err(io_err)?;
    }
    Ok(())
}

fn answer(catalog: &Catalog, req: &WireRequest) -> Result<Vec<Vec<f64>>> {
    let compiler = catalog
        .compiler(&req.compiler)
        .ok_or_else(|| Error::invalid(format!("unknown compiler `{}`", req.compiler)))?;
    let request = BatchRequest {
        compiler,
        objectives: &req.objectives,
        items: req.items.clone(),
    };
    Ok(SurrogateBackend
        .evaluate(&request)?
        .into_iter()
        .map(|v| v.0)
        .collect())
}

//! Report provenance and deterministic output helpers.
//!
//! Every JSON report carries a `meta` block with the tool version, an echo of
//! the effective configuration, and content hashes of the input meshes. The
//! timestamp lives only inside `meta`, so reports are bit-identical across
//! reruns apart from that one field.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use mcflow::TriangleMesh;

pub fn mesh_sha256(mesh: &TriangleMesh<f64>) -> String {
    let mut hasher = Sha256::new();
    for v in mesh.vertices() {
        hasher.update(v.x.to_le_bytes());
        hasher.update(v.y.to_le_bytes());
        hasher.update(v.z.to_le_bytes());
    }
    for f in mesh.faces() {
        hasher.update((f[0] as u64).to_le_bytes());
        hasher.update((f[1] as u64).to_le_bytes());
        hasher.update((f[2] as u64).to_le_bytes());
    }
    hex_string(&hasher.finalize())
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn meta_block(config_echo: Value, mesh_hash: Option<String>) -> Value {
    let timestamp = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut meta = Map::new();
    meta.insert("tool".into(), json!("mcflow"));
    meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    meta.insert("config".into(), config_echo);
    if let Some(h) = mesh_hash {
        meta.insert("mesh_sha256".into(), json!(h));
    }
    meta.insert("timestamp".into(), json!(timestamp));
    Value::Object(meta)
}

/// Write bytes atomically: temp file in the target directory, then rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out")
    ));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

pub fn write_json(path: &Path, value: &Value) -> std::io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable report");
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

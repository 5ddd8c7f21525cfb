use std::path::Path;

use super::{read_file, IoError};
use crate::acquire::Mesh;

/// Parses the triangle-list text format: `v x y z` and `f i j k` lines with
/// 1-based indices. Blank lines are skipped; anything else is rejected.
pub fn parse_mesh(text: &str) -> Result<Mesh, IoError> {
    let mut vertices = Vec::new();
    let mut triangles = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |what: &str| IoError::SchemaError(format!("line {}: {what}", n + 1));
        match fields.as_slice() {
            [] => {}
            ["v", rest @ ..] if rest.len() == 3 => {
                let mut v = [0.0; 3];
                for (slot, f) in v.iter_mut().zip(rest) {
                    *slot = f.parse().map_err(|_| err("bad vertex coordinate"))?;
                }
                vertices.push(v);
            }
            ["f", rest @ ..] if rest.len() == 3 => {
                let mut t = [0usize; 3];
                for (slot, f) in t.iter_mut().zip(rest) {
                    let i: usize = f.parse().map_err(|_| err("bad face index"))?;
                    *slot = i.checked_sub(1).ok_or_else(|| err("face indices start at 1"))?;
                }
                triangles.push(t);
            }
            _ => return Err(err("expected `v x y z` or `f i j k`")),
        }
    }
    Mesh::new(vertices, triangles).map_err(|e| IoError::SchemaError(e.to_string()))
}

pub fn read_mesh(path: impl AsRef<Path>) -> Result<Mesh, IoError> {
    let bytes = read_file(path.as_ref())?;
    parse_mesh(&String::from_utf8(bytes).map_err(|e| IoError::SchemaError(e.to_string()))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_quad() {
        let m = parse_mesh("v 0 0 5\nv 1 0 5\nv 1 1 5\n\nv 0 1 5\nf 1 2 3\nf 1 3 4\n").unwrap();
        assert_eq!(m.vertices().len(), 4);
        assert_eq!(m.triangles(), &[[0, 1, 2], [0, 2, 3]]);
    }

    #[test]
    fn rejects_everything_else() {
        for bad in [
            "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nvn 0 1 0\n",
            "# comment\nv 0 0 0\n",
            "v 0 0\n",
            "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n",
            "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n",
            "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3 4\n",
            "v 0 0 0\n",
            "v 0 -1 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n",
            "v a 0 0\n",
        ] {
            assert!(matches!(parse_mesh(bad), Err(IoError::SchemaError(_))), "{bad:?}");
        }
    }
}

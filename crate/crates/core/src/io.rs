//! Reading point clouds from CSV.

use std::io::Read;
use std::path::Path;

use crate::cloud::PointCloud;
use crate::error::{Error, Result};

/// Parses a CSV point cloud: one point per row, one coordinate per column.
///
/// A first row containing any non-numeric cell is treated as a header and skipped.
pub fn read_cloud_csv<R: Read>(input: R) -> Result<PointCloud> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if line == 0 => continue,
            Err(_) => {
                return Err(Error::Parse(format!("non-numeric cell on line {}", line + 1)));
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::Parse("no data rows".into()));
    }
    PointCloud::from_rows(&rows)
}

pub fn read_cloud_file(path: impl AsRef<Path>) -> Result<PointCloud> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let cloud = read_cloud_csv(std::io::BufReader::new(file))?;
    Ok(match path.file_stem().and_then(|s| s.to_str()) {
        Some(stem) => cloud.with_label(stem),
        None => cloud,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::write_csv;

    #[test]
    fn header_is_detected() {
        let c = read_cloud_csv("x0,x1\n1,2\n3,4.5\n".as_bytes()).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.point(1), &[3.0, 4.5]);
        let c = read_cloud_csv("1,2\n3,4.5\n".as_bytes()).unwrap();
        assert_eq!(c.len(), 2);
    }

    #[test]
    fn malformed_inputs() {
        assert!(matches!(read_cloud_csv("".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_cloud_csv("a,b\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_cloud_csv("1,2\nx,4\n".as_bytes()), Err(Error::Parse(_))));
        assert!(matches!(read_cloud_csv("1,2\n3\n".as_bytes()), Err(Error::InvalidCloud(_))));
        assert!(matches!(read_cloud_csv("1,2\n3,NaN\n".as_bytes()), Err(Error::InvalidCloud(_))));
        assert!(matches!(read_cloud_csv("1,2\n".as_bytes()), Err(Error::InvalidCloud(_))));
    }

    #[test]
    fn write_then_read_is_bit_exact() {
        let c = PointCloud::from_rows(&[vec![0.1 + 0.2, -1e-17, 12345.678901234567], vec![f64::MIN_POSITIVE, 1e300, -0.0]]).unwrap();
        for header in [false, true] {
            let mut buf = Vec::new();
            write_csv(&c, &mut buf, header).unwrap();
            let back = read_cloud_csv(buf.as_slice()).unwrap();
            assert_eq!(back.as_flat().iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                       c.as_flat().iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        }
    }
}

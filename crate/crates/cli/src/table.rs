use std::io::Write as _;
use std::path::Path;

use cone_moduli::continuation::SweepRow;

pub const HEADER_VERSION: &str = "# cone-moduli csv v1";

/// Versioned CSV: `step,angle_1..angle_m,volume,min_im_z,trace_re_1,trace_im_1,..,status`.
pub fn render(rows: &[SweepRow], m: usize) -> String {
    let mut header = vec!["step".to_string()];
    header.extend((1..=m).map(|j| format!("angle_{j}")));
    header.push("volume".into());
    header.push("min_im_z".into());
    for j in 1..=m {
        header.push(format!("trace_re_{j}"));
        header.push(format!("trace_im_{j}"));
    }
    header.push("status".into());

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&header).expect("in-memory write");
    let num = |x: f64| format!("{x:.15e}");
    for r in rows {
        let mut rec = vec![r.step.to_string()];
        rec.extend(r.angles.iter().map(|&a| num(a)));
        rec.push(num(r.volume));
        rec.push(num(r.min_im_z));
        for t in &r.traces {
            rec.push(num(t.re));
            rec.push(num(t.im));
        }
        rec.push(r.status.as_str().to_string());
        w.write_record(&rec).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output");
    format!("{HEADER_VERSION}\n{body}")
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use cone_moduli::continuation::RowStatus;
    use num_complex::Complex64;

    #[test]
    fn header_and_row_layout() {
        let row = SweepRow {
            step: 1,
            angles: vec![0.5, 0.5],
            volume: 1.25,
            min_im_z: 0.5,
            traces: vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, -0.0)],
            status: RowStatus::Completed,
            t_star: None,
            shapes: None,
            message: None,
        };
        let text = render(&[row], 2);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], HEADER_VERSION);
        assert_eq!(
            lines[1],
            "step,angle_1,angle_2,volume,min_im_z,trace_re_1,trace_im_1,trace_re_2,trace_im_2,status"
        );
        assert_eq!(lines[2].split(',').count(), 10);
        assert!(lines[2].starts_with("1,5.000000000000000e-1,"));
        assert!(lines[2].ends_with(",completed"));
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("out.csv");
        write_atomic(&p, "a\n").unwrap();
        write_atomic(&p, "b\n").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "b\n");
    }
}

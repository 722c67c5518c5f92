use crate::error::InstanceError;

pub(crate) fn weight(field: impl FnOnce() -> String, w: f64) -> Result<(), InstanceError> {
    if w.is_finite() && w >= 0.0 {
        Ok(())
    } else {
        Err(InstanceError::invalid(
            field(),
            format!("{w} is not a finite non-negative number"),
        ))
    }
}

pub(crate) fn weights(field: &str, ws: &[f64]) -> Result<(), InstanceError> {
    for (i, &w) in ws.iter().enumerate() {
        weight(|| format!("{field}[{i}]"), w)?;
    }
    Ok(())
}

pub(crate) fn len(field: &str, got: usize, want: usize) -> Result<(), InstanceError> {
    if got == want {
        Ok(())
    } else {
        Err(InstanceError::invalid(
            field,
            format!("has length {got}, expected {want}"),
        ))
    }
}

pub(crate) fn vertex(field: impl FnOnce() -> String, v: usize, n: usize) -> Result<(), InstanceError> {
    if v < n {
        Ok(())
    } else {
        Err(InstanceError::invalid(
            field(),
            format!("vertex {v} out of range (n = {n})"),
        ))
    }
}

pub(crate) fn horizon(steps: usize) -> Result<(), InstanceError> {
    if steps == 0 {
        Err(InstanceError::invalid("steps", "at least one time step is required"))
    } else {
        Ok(())
    }
}

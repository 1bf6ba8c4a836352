//! Large-array allocation with transparent-huge-page advice.
//!
//! Random access over arrays of tens of megabytes is dominated by TLB
//! misses with 4 KiB pages. Every benchmarked structure allocates its
//! per-object arrays through here so all of them get the same treatment.

/// Arrays smaller than this stay on ordinary pages.
const ADVISE_THRESHOLD: usize = 4 << 20;

/// Empty vector with room for `n` elements whose backing memory is
/// advised for huge pages before first touch.
pub(crate) fn vec_with_capacity<T>(n: usize) -> Vec<T> {
    let v = Vec::with_capacity(n);
    advise(&v);
    v
}

/// Collects `iter` into a vector allocated by [`vec_with_capacity`].
pub(crate) fn collect<T, I: ExactSizeIterator<Item = T>>(iter: I) -> Vec<T> {
    let mut v = vec_with_capacity(iter.len());
    v.extend(iter);
    v
}

#[cfg(target_os = "linux")]
fn advise<T>(v: &Vec<T>) {
    let bytes = v.capacity() * std::mem::size_of::<T>();
    if bytes < ADVISE_THRESHOLD {
        return;
    }
    let page = 4096usize;
    let start = v.as_ptr() as usize;
    let aligned = (start + page - 1) & !(page - 1);
    let len = (start + bytes).saturating_sub(aligned) & !(page - 1);
    if len == 0 {
        return;
    }
    // SAFETY: the range lies inside the vector's own allocation. The
    // advice changes only the paging policy, never the contents, and a
    // failure is harmless.
    unsafe {
        libc::madvise(aligned as *mut libc::c_void, len, libc::MADV_HUGEPAGE);
    }
}

#[cfg(not(target_os = "linux"))]
fn advise<T>(_v: &Vec<T>) {}

//! Allocation helper for the large working arrays of the linear-time passes.

/// An empty vector with room for `len` elements. On Linux, large buffers are
/// marked as eligible for transparent huge pages before first touch.
pub(crate) fn large_vec<T>(len: usize) -> Vec<T> {
    let v: Vec<T> = Vec::with_capacity(len);
    #[cfg(target_os = "linux")]
    advise_huge(v.as_ptr() as usize, len * std::mem::size_of::<T>());
    v
}

/// A zero-filled vector of `len` elements. Large buffers come straight from
/// fresh zero pages, which are marked for huge pages before first touch.
pub(crate) fn large_zeroed_vec<T: bytemuck::Zeroable + Clone>(len: usize) -> Vec<T> {
    let v: Vec<T> = bytemuck::zeroed_vec(len);
    #[cfg(target_os = "linux")]
    advise_huge(v.as_ptr() as usize, len * std::mem::size_of::<T>());
    v
}

#[cfg(target_os = "linux")]
fn advise_huge(addr: usize, bytes: usize) {
    const HUGE: usize = 2 << 20;
    if bytes < 2 * HUGE {
        return;
    }
    let lo = (addr + HUGE - 1) & !(HUGE - 1);
    let hi = (addr + bytes) & !(HUGE - 1);
    if hi > lo {
        // SAFETY: the range lies inside a live allocation owned by the caller;
        // madvise only changes paging hints and never invalidates the memory.
        unsafe {
            libc::madvise(lo as *mut libc::c_void, hi - lo, libc::MADV_HUGEPAGE);
        }
    }
}

/// Hints that `value` will be read soon.
#[inline(always)]
pub(crate) fn prefetch<T>(value: &T) {
    #[cfg(target_arch = "x86_64")]
    // SAFETY: prefetching is a hint with no architectural effect, and SSE is
    // part of the x86_64 baseline.
    unsafe {
        use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
        _mm_prefetch::<_MM_HINT_T0>(value as *const T as *const i8);
    }
    #[cfg(not(target_arch = "x86_64"))]
    let _ = value;
}

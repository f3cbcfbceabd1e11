#pragma once

namespace sonar {

/// Resolves a thread-count request: values >= 1 are used as-is; 0 means the
/// SEAFLOOR_THREADS environment variable if set, otherwise the OpenMP
/// default. Returns a value >= 1.
int resolve_threads(int requested);

}  // namespace sonar

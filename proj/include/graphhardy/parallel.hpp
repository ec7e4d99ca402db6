#pragma once

namespace graphhardy {

/// Caps the OpenMP pool at $GRAPHHARDY_THREADS when set. Returns the cap in effect.
int configure_threads_from_env();

int max_threads();

}  // namespace graphhardy

#pragma once

#include "possic/core.hpp"
#include "possic/diagnostics.hpp"
#include "possic/io.hpp"
#include "possic/nonconformity.hpp"
#include "possic/possibility.hpp"
#include "possic/predsets.hpp"
#include "possic/rng.hpp"
#include "possic/transducer.hpp"

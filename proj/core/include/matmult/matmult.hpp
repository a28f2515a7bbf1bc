// Copyright 2026 The matmult Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "matmult/gamma.hpp"
#include "matmult/json_io.hpp"
#include "matmult/jsr.hpp"
#include "matmult/law.hpp"
#include "matmult/lift.hpp"
#include "matmult/moments.hpp"
#include "matmult/rng.hpp"
#include "matmult/selberg_delange.hpp"
#include "matmult/sieve.hpp"
#include "matmult/types.hpp"

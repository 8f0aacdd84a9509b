// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nhsyk/complexity.hpp"
#include "nhsyk/ensemble.hpp"
#include "nhsyk/errors.hpp"
#include "nhsyk/exports.hpp"
#include "nhsyk/form_factor.hpp"
#include "nhsyk/linalg.hpp"
#include "nhsyk/majorana.hpp"
#include "nhsyk/model.hpp"
#include "nhsyk/rmt.hpp"
#include "nhsyk/rng.hpp"
#include "nhsyk/spacing.hpp"
#include "nhsyk/spectral.hpp"
#include "nhsyk/spectrum_io.hpp"

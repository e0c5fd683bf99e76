// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "imcsort/bitcell_array.hpp"
#include "imcsort/engine.hpp"
#include "imcsort/error.hpp"
#include "imcsort/microcode.hpp"
#include "imcsort/perfmodel.hpp"
#include "imcsort/program_text.hpp"
#include "imcsort/sortnet.hpp"

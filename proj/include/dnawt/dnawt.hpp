#pragma once

#include "dnawt/bits.hpp"
#include "dnawt/block_erasure.hpp"
#include "dnawt/capacity.hpp"
#include "dnawt/codec.hpp"
#include "dnawt/component_channels.hpp"
#include "dnawt/converse.hpp"
#include "dnawt/counting.hpp"
#include "dnawt/entropy.hpp"
#include "dnawt/erasure_probs.hpp"
#include "dnawt/errors.hpp"
#include "dnawt/leakage.hpp"
#include "dnawt/rng.hpp"
#include "dnawt/sampling_channel.hpp"
#include "dnawt/verify.hpp"

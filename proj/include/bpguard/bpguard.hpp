#pragma once

#include "attack_lab.hpp"
#include "cli.hpp"
#include "cluster_sim.hpp"
#include "error.hpp"
#include "json_io.hpp"
#include "profile.hpp"
#include "profile_builder.hpp"
#include "profile_codec.hpp"
#include "sha1.hpp"
#include "simulate.hpp"
#include "stats.hpp"
#include "trace_io.hpp"
#include "verifier.hpp"

#pragma once

#include "wavetails/error.hpp"
#include "wavetails/quadrature.hpp"
#include "wavetails/profile.hpp"
#include "wavetails/model.hpp"
#include "wavetails/initdata.hpp"
#include "wavetails/evolve.hpp"
#include "wavetails/duhamel.hpp"
#include "wavetails/tails.hpp"
#include "wavetails/fit.hpp"
#include "wavetails/config.hpp"
#include "wavetails/io.hpp"
#include "wavetails/reproduce.hpp"

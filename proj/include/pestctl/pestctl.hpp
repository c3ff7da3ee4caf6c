#pragma once

#include "pestctl/config.hpp"
#include "pestctl/control.hpp"
#include "pestctl/cost.hpp"
#include "pestctl/cost_spec.hpp"
#include "pestctl/diffusion.hpp"
#include "pestctl/error.hpp"
#include "pestctl/field_io.hpp"
#include "pestctl/fields.hpp"
#include "pestctl/hypothesis.hpp"
#include "pestctl/nonlocal_velocity.hpp"
#include "pestctl/oracles.hpp"
#include "pestctl/output.hpp"
#include "pestctl/reaction.hpp"
#include "pestctl/search.hpp"
#include "pestctl/simulator.hpp"
#include "pestctl/transport.hpp"

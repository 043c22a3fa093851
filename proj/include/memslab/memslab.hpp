#pragma once

#include "memslab/error.hpp"
#include "memslab/filtering.hpp"
#include "memslab/frontier.hpp"
#include "memslab/measures.hpp"
#include "memslab/numerics.hpp"
#include "memslab/parallel.hpp"
#include "memslab/sampling.hpp"
#include "memslab/states.hpp"

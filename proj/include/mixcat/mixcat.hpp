#pragma once

#include "mixcat/corpus.hpp"
#include "mixcat/counts.hpp"
#include "mixcat/clustering.hpp"
#include "mixcat/estimation.hpp"
#include "mixcat/models.hpp"
#include "mixcat/eval.hpp"
#include "mixcat/persist.hpp"

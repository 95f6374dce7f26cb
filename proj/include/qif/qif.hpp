#pragma once

#include "qif/algebra.hpp"
#include "qif/bounds.hpp"
#include "qif/channel.hpp"
#include "qif/crowds.hpp"
#include "qif/dining.hpp"
#include "qif/error.hpp"
#include "qif/io.hpp"
#include "qif/label.hpp"
#include "qif/matrix.hpp"
#include "qif/measures.hpp"
#include "qif/random.hpp"
#include "qif/refinement.hpp"
#include "qif/simplex.hpp"

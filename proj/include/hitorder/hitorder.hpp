#pragma once

#include "hitorder/coupling.hpp"
#include "hitorder/errors.hpp"
#include "hitorder/hitting.hpp"
#include "hitorder/io.hpp"
#include "hitorder/matrix.hpp"
#include "hitorder/order.hpp"
#include "hitorder/rational.hpp"
#include "hitorder/spectral.hpp"
#include "hitorder/words.hpp"

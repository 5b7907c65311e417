#pragma once

#include "thompson/classify.hpp"
#include "thompson/diagrams.hpp"
#include "thompson/errors.hpp"
#include "thompson/folner.hpp"
#include "thompson/words.hpp"

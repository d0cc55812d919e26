// Copyright 2026 The qalloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <map>
#include <set>

#include "qalloc/ast.hpp"

namespace qalloc {

// Simultaneous renamings. [x -> y, y -> x] applied to (x, y) yields (y, x).
using VarSubst = std::map<VarName, VarName>;
using QidxSubst = std::map<Qidx, Qidx>;

// Renames free occurrences only; binders shadow. Throws
// Error(CaptureError) if a renaming target collides with a binder in scope
// of an active mapping.
SourceExprPtr apply_var_subst(const VarSubst& subst, const SourceExprPtr& expr);
TargetExprPtr apply_var_subst(const VarSubst& subst, const TargetExprPtr& expr);

// Capture-avoiding variants used by the interpreters: instead of failing,
// binders that would capture a renaming target are alpha-renamed to fresh
// reserved names on the fly.
SourceExprPtr substitute_avoiding(const VarSubst& subst, const SourceExprPtr& expr,
                                  FreshNames& fresh);
TargetExprPtr substitute_avoiding(const VarSubst& subst, const TargetExprPtr& expr,
                                  FreshNames& fresh);

std::set<VarName> free_vars(const SourceExprPtr& expr);
std::set<VarName> free_vars(const TargetExprPtr& expr);

// Every name that occurs in binder position anywhere in the expression.
std::set<VarName> binder_names(const SourceExprPtr& expr);

// Alpha-renames every binder of `name` inside `expr` (each occurrence gets
// its own fresh name). Free occurrences of `name` are left alone.
SourceExprPtr alpha_rename_binders(const SourceExprPtr& expr, const VarName& name,
                                   FreshNames& fresh);

// Ψ(Γ): applies each transposition in order; the variables occupying the two
// qidxs exchange them. A pair with a single occupant moves that occupant; a
// pair with none is a no-op. Total by construction.
TgtTypeEnv apply_swaps_to_env(const SwapSequence& psi, const TgtTypeEnv& gamma);

}  // namespace qalloc

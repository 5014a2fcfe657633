// Copyright 2026 The CWM Arena Authors. All rights reserved.
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

#include "cwm/games/registry.hpp"

#include "cwm/core/errors.hpp"
#include "cwm/games/bargaining.hpp"
#include "cwm/games/filtering_sampler.hpp"
#include "cwm/games/hand_of_war.hpp"
#include "cwm/games/leduc_poker.hpp"
#include "cwm/games/mnk.hpp"
#include "cwm/games/quadranto.hpp"
#include "cwm/games/reference_samplers.hpp"

namespace cwm::games {
namespace {

constexpr const char* kTicTacToeRules = R"(Tic-tac-toe
Two players, 'x' (player 0) and 'o' (player 1), take turns writing their mark
in an empty cell of a 3x3 grid; 'x' goes first. A player who completes a row,
a column or a diagonal of three of their own marks wins immediately. If all
nine cells are filled without such a line, the game is a draw.
Actions are written as the mark followed by the zero-based (row,column) of the
cell, for example x(1,0) for the first column of the middle row. Rewards are
+1 for the winner and -1 for the loser, 0 each for a draw.)";

constexpr const char* kConnectFourRules = R"(Connect four
A board stands upright with 6 rows and 7 columns. Player 0 drops 'x' discs and
player 1 drops 'o' discs, alternating, with 'x' first. A dropped disc falls to
the lowest empty cell of the chosen column; full columns cannot be chosen.
Four of one's own discs in an unbroken horizontal, vertical or diagonal line
wins. A full board without such a line is a draw.
Actions are the mark followed by the zero-based column, e.g. x3 or o0. Rewards
are +1/-1 for win/loss and 0 for a draw.)";

constexpr const char* kGenTicTacToeRules = R"(Generalized tic-tac-toe
Played like tic-tac-toe but on a 6x6 grid, and a line needs 4 consecutive
marks (horizontal, vertical or diagonal) to win. Player 0 places 'x' first,
player 1 places 'o'. A full grid without a winning line is a draw.
Actions: mark plus zero-based (row,column), e.g. o(5,2). Rewards +1/-1 for
win/loss, 0 for a draw.)";

constexpr const char* kLeducRules = R"(Leduc poker
Six cards: jack, queen and king in two suits (spades 's', hearts 'h').
Before any card is dealt, player 0 puts 1 chip in the pot and player 1 puts 2.
Each player is dealt one private card. In the first betting round player 0
acts first and may Call (match the outstanding amount), Raise (match and add
2 more) or Fold (give up, only allowed when behind in the pot). At most two
bets occur in a round, with the opening 2-chip post counting as the first bet
of round one. A round ends when a player calls after both have acted. Then
one public card is dealt face up and a second round follows, with raises of
4 chips and again player 0 acting first and at most two raises.
Showdown: a private card that pairs the public card wins; otherwise the higher
rank wins (K > Q > J); equal ranks split. The winner gains what the loser put
in the pot; a player who folds loses what they put in.
Chance actions are deal:<card> with cards Js, Jh, Qs, Qh, Ks, Kh. Player
actions are Fold, Call and Raise. Observations show the own card, the public
card once dealt, both contributions and the betting so far.)";

constexpr const char* kBargainingRules = R"(Bargaining
There are three item types. Chance first draws how many of each item are in
the pool (1 to 3 each, action pool:a,b,c), then the private value player 0
gives each item type (0 to 4 each, action p0_values:a,b,c) and then player 1's
values (p1_values:a,b,c). Each player sees the pool and only its own values.
Players alternate proposals, player 0 first. A proposal
"player P offers a,b,c" means P keeps a,b,c items of each type and the other
player receives the rest of the pool. Instead of proposing, a player may
accept the opponent's latest proposal with "player P agrees", which ends the
game: each player then earns the sum over item types of items received times
its own value. If ten proposals have been made without agreement, the game
ends and both players earn 0.)";

constexpr const char* kQuadrantoRules = R"(Quadranto
Two pursuers share a 4x4 grid with rows and columns numbered 0 to 3 from the
top-left corner. Chance first places player 0 on one of the four cells of the
top-left 2x2 block and then player 1 on one of the four cells of the
bottom-right 2x2 block (action place(r,c)). Players then take turns, player 0
first. Each turn a player moves one cell Left, Right, Up or Down, or stays
put (Stay); moves that would leave the grid are not allowed. Moving onto the
cell where the opponent stands captures it and wins (+1 for the capturer, -1
for the other). When 20 moves have been made in total without a capture the
game is drawn with 0 for both.
A player always knows its own cell but only learns which 2x2 block
(top_left, top_right, bottom_left, bottom_right) the opponent is in.)";

constexpr const char* kHandOfWarRules = R"(Hand of war
A 16-card deck holds four ranks, Ace (highest), King, Queen and Jack, in the
suits S, H, D, C; cards are written rank then suit, e.g. AS or JD. The deck is
shuffled and split into two face-down draw piles of 8, one per player; each
player draws a hand of 3. Draws are chance actions draw:<card>.
In every battle both players choose a card from hand without seeing the
other's choice: player 0 commits first, face down, then player 1 (play:<card>),
and both cards are revealed. The higher rank takes both cards, plus any cards
left on the table, into its win pile, and both players refill their hands to
3 cards from their own draw piles. Equal ranks start a showdown: the played
cards stay on the table, each player moves the top card of its draw pile to
the table face down (chance action burn:<card>), and both play again from
hand. The winner of the next decided battle takes everything on the table.
The game ends when a player holds all 16 cards, or when a player cannot draw
or burn as required. The player with more cards in its win pile wins (+1/-1;
equal piles draw). Each player sees its own hand and draw-pile size, the
opponent's hand and draw-pile sizes, whether the opponent has committed, the
win-pile sizes, the number of cards on the table and every revealed pair.)";

struct Entry {
  const char* name;
  GameBundle (*make)();
};

GameBundle mnk_bundle(const char* name, MnkConfig config, const char* rules, int universe) {
  auto model = std::make_shared<MnkGame>(config);
  GameBundle b;
  b.name = name;
  b.model.model = model;
  b.initial_state = model->initial_state();
  b.metadata = {2, Observability::kPerfect, PayoffKind::kWinLossDraw, universe};
  b.rules = rules;
  b.forfeit_payoffs = [](const GameState&, PlayerId p) { return win_loss_forfeit(2, p); };
  return b;
}

GameBundle make_leduc() {
  auto model = std::make_shared<LeducPoker>();
  GameBundle b;
  b.name = "leduc_poker";
  b.model.model = model;
  b.model.history_sampler = std::make_shared<LeducHistorySampler>();
  b.initial_state = model->initial_state();
  b.metadata = {2, Observability::kImperfect, PayoffKind::kZeroSum, 3};
  b.rules = kLeducRules;
  b.forfeit_payoffs = [model](const GameState& s, PlayerId p) { return model->forfeit_payoffs(s, p); };
  return b;
}

GameBundle make_bargaining() {
  auto model = std::make_shared<Bargaining>();
  GameBundle b;
  b.name = "bargaining";
  b.model.model = model;
  b.model.history_sampler = std::make_shared<BargainingHistorySampler>();
  b.initial_state = model->initial_state();
  b.metadata = {2, Observability::kImperfect, PayoffKind::kGeneralSum, 121};
  b.rules = kBargainingRules;
  b.forfeit_payoffs = [model](const GameState& s, PlayerId p) { return model->forfeit_payoffs(s, p); };
  return b;
}

GameBundle make_quadranto() {
  auto model = std::make_shared<Quadranto>();
  GameBundle b;
  b.name = "quadranto";
  b.model.model = model;
  b.model.history_sampler = std::make_shared<FilteringHistorySampler>(model);
  b.initial_state = model->initial_state();
  b.metadata = {2, Observability::kImperfect, PayoffKind::kWinLossDraw, 5};
  b.rules = kQuadrantoRules;
  b.forfeit_payoffs = [](const GameState&, PlayerId p) { return win_loss_forfeit(2, p); };
  return b;
}

GameBundle make_hand_of_war() {
  auto model = std::make_shared<HandOfWar>();
  GameBundle b;
  b.name = "hand_of_war";
  b.model.model = model;
  b.model.history_sampler = std::make_shared<HandOfWarHistorySampler>();
  b.initial_state = model->initial_state();
  b.metadata = {2, Observability::kImperfect, PayoffKind::kWinLossDraw, 16};
  b.rules = kHandOfWarRules;
  b.forfeit_payoffs = [](const GameState&, PlayerId p) { return win_loss_forfeit(2, p); };
  return b;
}

const Entry kEntries[] = {
    {"tic_tac_toe", [] { return mnk_bundle("tic_tac_toe", tic_tac_toe_config(), kTicTacToeRules, 9); }},
    {"connect_four", [] { return mnk_bundle("connect_four", connect_four_config(), kConnectFourRules, 7); }},
    {"gen_tic_tac_toe",
     [] { return mnk_bundle("gen_tic_tac_toe", gen_tic_tac_toe_config(), kGenTicTacToeRules, 36); }},
    {"leduc_poker", make_leduc},
    {"bargaining", make_bargaining},
    {"quadranto", make_quadranto},
    {"hand_of_war", make_hand_of_war},
};

}  // namespace

GameBundle make_game(std::string_view name) {
  for (const auto& e : kEntries) {
    if (name == e.name) return e.make();
  }
  throw UnknownGame("unknown game '" + std::string(name) + "'");
}

const std::vector<std::string>& game_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : kEntries) out.emplace_back(e.name);
    return out;
  }();
  return names;
}

std::shared_ptr<const HistorySampler> reference_inference(std::string_view name) {
  GameBundle b = make_game(name);
  if (b.perfect_information()) {
    throw NotApplicable("'" + b.name + "' is a perfect-information game; no inference needed");
  }
  return b.model.history_sampler;
}

std::vector<double> win_loss_forfeit(int num_players, PlayerId forfeiter) {
  std::vector<double> r(static_cast<std::size_t>(num_players), 1.0);
  r[static_cast<std::size_t>(forfeiter)] = -1.0;
  return r;
}

std::string to_string(Observability o) {
  return o == Observability::kPerfect ? "perfect" : "imperfect";
}

std::string to_string(PayoffKind k) {
  switch (k) {
    case PayoffKind::kWinLossDraw: return "wld";
    case PayoffKind::kZeroSum: return "zero_sum";
    case PayoffKind::kGeneralSum: return "general_sum";
  }
  return "unknown";
}

}  // namespace cwm::games

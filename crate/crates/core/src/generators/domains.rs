//! Domain files for the generated benchmark families.

pub const DELIVERY: &str = "\
(define (domain delivery)
  (:requirements :strips :typing)
  (:types cell locatable - object package truck - locatable)
  (:predicates (adjacent ?x - cell ?y - cell) (at ?l - locatable ?c - cell)
               (carrying ?t - truck ?p - package) (empty ?t - truck))
  (:action pick_package
    :parameters (?t - truck ?p - package ?x - cell)
    :precondition (and (at ?p ?x) (at ?t ?x) (empty ?t))
    :effect (and (not (at ?p ?x)) (not (empty ?t)) (carrying ?t ?p)))
  (:action drop_package
    :parameters (?t - truck ?p - package ?x - cell)
    :precondition (and (at ?t ?x) (carrying ?t ?p))
    :effect (and (empty ?t) (not (carrying ?t ?p)) (at ?p ?x)))
  (:action move
    :parameters (?t - truck ?from - cell ?to - cell)
    :precondition (and (adjacent ?from ?to) (at ?t ?from))
    :effect (and (not (at ?t ?from)) (at ?t ?to))))
";

pub const GRIPPER: &str = "\
(define (domain gripper)
  (:requirements :strips)
  (:predicates (room ?r) (ball ?b) (gripper ?g) (at-robby ?r) (at ?b ?r) (free ?g) (carry ?o ?g))
  (:action move
    :parameters (?from ?to)
    :precondition (and (room ?from) (room ?to) (at-robby ?from))
    :effect (and (at-robby ?to) (not (at-robby ?from))))
  (:action pick
    :parameters (?obj ?room ?gripper)
    :precondition (and (ball ?obj) (room ?room) (gripper ?gripper) (at ?obj ?room) (at-robby ?room) (free ?gripper))
    :effect (and (carry ?obj ?gripper) (not (at ?obj ?room)) (not (free ?gripper))))
  (:action drop
    :parameters (?obj ?room ?gripper)
    :precondition (and (ball ?obj) (room ?room) (gripper ?gripper) (carry ?obj ?gripper) (at-robby ?room))
    :effect (and (at ?obj ?room) (free ?gripper) (not (carry ?obj ?gripper)))))
";

pub const SPANNER: &str = "\
(define (domain spanner)
  (:requirements :strips :typing)
  (:types location locatable - object man nut spanner - locatable)
  (:predicates (at ?m - locatable ?l - location) (carrying ?m - man ?s - spanner) (useable ?s - spanner)
               (link ?l1 - location ?l2 - location) (tightened ?n - nut) (loose ?n - nut))
  (:action walk
    :parameters (?start - location ?end - location ?m - man)
    :precondition (and (at ?m ?start) (link ?start ?end))
    :effect (and (not (at ?m ?start)) (at ?m ?end)))
  (:action pickup_spanner
    :parameters (?l - location ?s - spanner ?m - man)
    :precondition (and (at ?m ?l) (at ?s ?l))
    :effect (and (not (at ?s ?l)) (carrying ?m ?s)))
  (:action tighten_nut
    :parameters (?l - location ?s - spanner ?m - man ?n - nut)
    :precondition (and (at ?m ?l) (at ?n ?l) (carrying ?m ?s) (useable ?s) (loose ?n))
    :effect (and (not (loose ?n)) (not (useable ?s)) (tightened ?n))))
";

pub const MICONIC: &str = "\
(define (domain miconic)
  (:requirements :strips)
  (:predicates (origin ?person ?floor) (floor ?floor) (passenger ?passenger) (destin ?person ?floor)
               (above ?floor1 ?floor2) (boarded ?person) (served ?person) (lift-at ?floor))
  (:action board
    :parameters (?f ?p)
    :precondition (and (floor ?f) (passenger ?p) (lift-at ?f) (origin ?p ?f))
    :effect (boarded ?p))
  (:action depart
    :parameters (?f ?p)
    :precondition (and (floor ?f) (passenger ?p) (lift-at ?f) (destin ?p ?f) (boarded ?p))
    :effect (and (not (boarded ?p)) (served ?p)))
  (:action up
    :parameters (?f1 ?f2)
    :precondition (and (floor ?f1) (floor ?f2) (lift-at ?f1) (above ?f1 ?f2))
    :effect (and (lift-at ?f2) (not (lift-at ?f1))))
  (:action down
    :parameters (?f1 ?f2)
    :precondition (and (floor ?f1) (floor ?f2) (lift-at ?f1) (above ?f2 ?f1))
    :effect (and (lift-at ?f2) (not (lift-at ?f1)))))
";

pub const REWARD: &str = "\
(define (domain reward)
  (:requirements :strips :typing)
  (:types cell)
  (:predicates (adjacent ?from - cell ?to - cell) (at ?c - cell) (reward ?c - cell)
               (picked ?c - cell) (unblocked ?c - cell))
  (:action move
    :parameters (?from - cell ?to - cell)
    :precondition (and (adjacent ?from ?to) (at ?from) (unblocked ?to))
    :effect (and (not (at ?from)) (at ?to)))
  (:action pick-reward
    :parameters (?x - cell)
    :precondition (and (at ?x) (reward ?x))
    :effect (and (not (reward ?x)) (picked ?x))))
";

pub const VISITALL: &str = "\
(define (domain grid-visit-all)
  (:requirements :strips :typing)
  (:types place)
  (:predicates (connected ?x - place ?y - place) (at-robot ?x - place) (visited ?x - place))
  (:action move
    :parameters (?curpos - place ?nextpos - place)
    :precondition (and (at-robot ?curpos) (connected ?curpos ?nextpos))
    :effect (and (at-robot ?nextpos) (not (at-robot ?curpos)) (visited ?nextpos))))
";

pub const BLOCKS: &str = "\
(define (domain blocks)
  (:requirements :strips)
  (:predicates (clear ?x) (ontable ?x) (handempty) (holding ?x) (on ?x ?y))
  (:action pick-up
    :parameters (?x)
    :precondition (and (clear ?x) (ontable ?x) (handempty))
    :effect (and (not (ontable ?x)) (not (clear ?x)) (not (handempty)) (holding ?x)))
  (:action put-down
    :parameters (?x)
    :precondition (holding ?x)
    :effect (and (not (holding ?x)) (clear ?x) (handempty) (ontable ?x)))
  (:action stack
    :parameters (?x ?y)
    :precondition (and (holding ?x) (clear ?y))
    :effect (and (not (holding ?x)) (not (clear ?y)) (clear ?x) (handempty) (on ?x ?y)))
  (:action unstack
    :parameters (?x ?y)
    :precondition (and (on ?x ?y) (clear ?x) (handempty))
    :effect (and (holding ?x) (clear ?y) (not (clear ?x)) (not (handempty)) (not (on ?x ?y)))))
";

pub const CHILDSNACK: &str = "\
(define (domain child-snack)
  (:requirements :typing :strips)
  (:types child bread-portion content-portion sandwich tray place)
  (:constants kitchen - place)
  (:predicates (at_kitchen_bread ?b - bread-portion) (at_kitchen_content ?c - content-portion)
               (at_kitchen_sandwich ?s - sandwich) (no_gluten_bread ?b - bread-portion)
               (no_gluten_content ?c - content-portion) (ontray ?s - sandwich ?t - tray)
               (no_gluten_sandwich ?s - sandwich) (allergic_gluten ?c - child)
               (not_allergic_gluten ?c - child) (served ?c - child) (waiting ?c - child ?p - place)
               (at ?t - tray ?p - place) (notexist ?s - sandwich))
  (:action make_sandwich_no_gluten
    :parameters (?s - sandwich ?b - bread-portion ?c - content-portion)
    :precondition (and (at_kitchen_bread ?b) (at_kitchen_content ?c) (no_gluten_bread ?b)
                       (no_gluten_content ?c) (notexist ?s))
    :effect (and (not (at_kitchen_bread ?b)) (not (at_kitchen_content ?c)) (at_kitchen_sandwich ?s)
                 (no_gluten_sandwich ?s) (not (notexist ?s))))
  (:action make_sandwich
    :parameters (?s - sandwich ?b - bread-portion ?c - content-portion)
    :precondition (and (at_kitchen_bread ?b) (at_kitchen_content ?c) (notexist ?s))
    :effect (and (not (at_kitchen_bread ?b)) (not (at_kitchen_content ?c)) (at_kitchen_sandwich ?s)
                 (not (notexist ?s))))
  (:action put_on_tray
    :parameters (?s - sandwich ?t - tray)
    :precondition (and (at_kitchen_sandwich ?s) (at ?t kitchen))
    :effect (and (not (at_kitchen_sandwich ?s)) (ontray ?s ?t)))
  (:action serve_sandwich_no_gluten
    :parameters (?s - sandwich ?c - child ?t - tray ?p - place)
    :precondition (and (allergic_gluten ?c) (ontray ?s ?t) (waiting ?c ?p) (no_gluten_sandwich ?s) (at ?t ?p))
    :effect (and (not (ontray ?s ?t)) (served ?c)))
  (:action serve_sandwich
    :parameters (?s - sandwich ?c - child ?t - tray ?p - place)
    :precondition (and (not_allergic_gluten ?c) (waiting ?c ?p) (ontray ?s ?t) (at ?t ?p))
    :effect (and (not (ontray ?s ?t)) (served ?c)))
  (:action move_tray
    :parameters (?t - tray ?p1 - place ?p2 - place)
    :precondition (and (at ?t ?p1))
    :effect (and (not (at ?t ?p1)) (at ?t ?p2))))
";
